//! Exact rational helpers: decimal parsing and formatting.
//!
//! Every probability in this crate is a [`Rational`]. Text never goes
//! through binary floating point on the way in, so `"0.3"` is exactly
//! `3/10`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

fn parse_error(token: &str, reason: &str) -> Error {
    Error::Parse { token: token.to_string(), reason: reason.to_string() }
}

/// Parses a finite decimal (`-1.25`, `3e-2`, `.5`) or a rational literal
/// (`1/3`) into an exact rational.
pub fn parse_rational(token: &str) -> Result<Rational> {
    let t = token.trim();
    if t.is_empty() {
        return Err(parse_error(token, "empty token"));
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt =
            num.trim().parse().map_err(|_| parse_error(token, "bad numerator"))?;
        let den: BigInt =
            den.trim().parse().map_err(|_| parse_error(token, "bad denominator"))?;
        if den.is_zero() {
            return Err(parse_error(token, "zero denominator"));
        }
        return Ok(Rational::new(num, den));
    }

    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = body[pos + 1..]
                .parse()
                .map_err(|_| parse_error(token, "bad exponent"))?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (whole, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(parse_error(token, "no digits"));
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(parse_error(token, "not a decimal number"));
    }
    let digits = format!("{whole}{frac}");
    let mut num: BigInt = digits.parse().map_err(|_| parse_error(token, "bad digits"))?;
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Exact text form: a terminating decimal when the reduced denominator is
/// `2^a * 5^b`, otherwise `num/den`.
pub fn format_exact(r: &Rational) -> String {
    let den = r.denom();
    let (mut rest, mut twos, mut fives) = (den.clone(), 0usize, 0usize);
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while rest.is_even() {
        rest /= &two;
        twos += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        fives += 1;
    }
    if !rest.is_one() {
        return format!("{}/{}", r.numer(), den);
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10), places));
    place_point(&scaled.to_integer(), places)
}

/// Inserts a decimal point `places` digits from the right of `n` and trims
/// trailing zeros.
fn place_point(n: &BigInt, places: usize) -> String {
    let sign = if n.sign() == Sign::Minus { "-" } else { "" };
    let digits = n.abs().to_string();
    if places == 0 {
        return format!("{sign}{digits}");
    }
    let padded = if digits.len() <= places {
        format!("{}{}", "0".repeat(places + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Decimal rendering rounded (half away from zero) to `sig` significant
/// digits, trailing zeros removed.
pub fn format_significant(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sig = sig.max(1);
    let negative = r.is_negative();
    let v = r.abs();
    // floor(log10 v), found by comparing against powers of ten.
    let ten = Rational::from_integer(BigInt::from(10));
    let mut exp: i64 = 0;
    let mut probe = Rational::one();
    if v >= probe {
        while v >= &probe * &ten {
            probe *= &ten;
            exp += 1;
        }
    } else {
        while v < probe {
            probe /= &ten;
            exp -= 1;
        }
    }
    let shift = sig as i64 - 1 - exp;
    let scaled = if shift >= 0 {
        v * Rational::from_integer(num_traits::pow(BigInt::from(10), shift as usize))
    } else {
        v / Rational::from_integer(num_traits::pow(BigInt::from(10), (-shift) as usize))
    };
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (mantissa, places) = if shift >= 0 {
        (rounded, shift as usize)
    } else {
        (rounded * num_traits::pow(BigInt::from(10), (-shift) as usize), 0)
    };
    let mantissa = if negative { -mantissa } else { mantissa };
    place_point(&mantissa, places)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact value of a finite binary float. Note that `0.1_f64` is not `1/10`.
pub fn from_f64(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| parse_error(&v.to_string(), "not a finite number"))
}

/// Serde adapter writing rationals as exact strings.
pub mod as_string {
    use super::{format_exact, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_exact(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

pub mod vec_as_string {
    use super::{format_exact, Rational};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&format_exact(r))?;
        }
        seq.end()
    }
}

pub mod option_as_string {
    use super::{format_exact, Rational};
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(r) => s.serialize_some(&format_exact(r)),
            None => s.serialize_none(),
        }
    }
}
