//! Probability distributions over a finite alphabet `[n] = {1, ..., n}`.
//!
//! Entries are exact rationals and always sum to exactly one. Symbols are
//! stored 0-based but reported 1-based in errors and text output.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{check_dims, Error, Result};
use crate::rational::{format_exact, from_f64, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Distribution {
    probs: Vec<Rational>,
}

impl Distribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((i, v)) = probs.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::NegativeEntry { index: i + 1, value: format_exact(v) });
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotNormalized { sum: format_exact(&sum) });
        }
        Ok(Self { probs })
    }

    /// Builds a distribution from binary floats, taking each at its exact
    /// binary value. `[0.1, 0.9]` is rejected because neither float is the
    /// decimal it looks like; parse text instead when decimals matter.
    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| from_f64(v)).collect::<Result<_>>()?)
    }

    /// `counts[i] / denominator` for each symbol.
    pub fn from_counts(counts: &[u64], denominator: u64) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::range("denominator must be positive"));
        }
        let den = BigInt::from(denominator);
        Self::new(
            counts
                .iter()
                .map(|&c| Rational::new(BigInt::from(c), den.clone()))
                .collect(),
        )
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        let each = Rational::new(BigInt::one(), BigInt::from(n));
        Ok(Self { probs: vec![each; n] })
    }

    /// Point mass on the 0-based `symbol`.
    pub fn point_mass(n: usize, symbol: usize) -> Result<Self> {
        if symbol >= n {
            return Err(Error::range(format!("symbol {} outside 1..={n}", symbol + 1)));
        }
        let mut probs = vec![Rational::zero(); n];
        probs[symbol] = Rational::one();
        Ok(Self { probs })
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    /// Probability of the 0-based symbol `i`.
    pub fn prob(&self, i: usize) -> &Rational {
        &self.probs[i]
    }

    pub fn max_prob(&self) -> &Rational {
        self.probs.iter().max().expect("non-empty")
    }

    /// Relabels symbols: entry `k` of the result is `self[order[k]]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        check_dims(self.len(), order.len())?;
        let mut seen = vec![false; order.len()];
        for &o in order {
            if o >= order.len() || std::mem::replace(&mut seen[o], true) {
                return Err(Error::NotAPermutation {
                    n: order.len(),
                    detail: format!("{:?}", order),
                });
            }
        }
        Ok(Self { probs: order.iter().map(|&o| self.probs[o].clone()).collect() })
    }
}

/// Accepts a JSON array (`[0.4, 0.6]`) or a comma-separated list
/// (`0.4,0.6`) of exact decimals or `a/b` rationals.
pub fn parse_distribution(text: &str) -> Result<Distribution> {
    let trimmed = text.trim();
    let body = if let Some(rest) = trimmed.strip_prefix('[') {
        rest.strip_suffix(']').ok_or_else(|| Error::Parse {
            token: trimmed.to_string(),
            reason: "unterminated JSON array".to_string(),
        })?
    } else {
        trimmed
    };
    if body.trim().is_empty() {
        return Err(Error::Empty);
    }
    let probs = body.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?;
    Distribution::new(probs)
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_distribution(s)
    }
}

/// `[0.4,0.3,1/3]`; parses back with [`parse_distribution`].
impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.probs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_exact(p))?;
        }
        write!(f, "]")
    }
}

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::vec_as_string::serialize(&self.probs, s)
    }
}

/// `(1/2) * sum_i |p_i - q_i|`, exactly.
pub fn total_variation(p: &Distribution, q: &Distribution) -> Result<Rational> {
    check_dims(p.len(), q.len())?;
    let l1: Rational = p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum();
    Ok(l1 / Rational::from_integer(BigInt::from(2)))
}
