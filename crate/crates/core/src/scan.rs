//! Simplex scans: for a distribution `p`, the worst mismatch cost and the
//! largest Kendall distance between optimal guessing functions over all
//! `q` within a total variation ball around `p`.
//!
//! The ball is searched on the barycentric lattice `{x / r : sum x = r}`
//! of the inner resolution `r`, plus `p` itself (so the ball is never
//! empty). Results are lower bounds on the continuum maxima and converge
//! as `r` grows.

use std::io::{self, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{total_variation, Distribution};
use crate::divergence::kendall_tau;
use crate::error::{Error, Result};
use crate::guesswork::{canonical_optimal, mismatch_cost, optimal_set, DEFAULT_ENUMERATION_CAP};
use crate::rational::{self, format_significant, int, Rational};

pub const DEFAULT_INNER_RESOLUTION: u64 = 400;

/// Header of the scan CSV.
pub const CSV_HEADER: &str = "p1,p2,p3,max_delta,max_kendall";

/// Significant digits of CSV values.
pub const CSV_DIGITS: usize = 12;

// Common denominators above this use the exact-rational search.
const MAX_INTEGER_SCALE: i64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallExtrema {
    #[serde(with = "rational::as_string")]
    pub max_delta: Rational,
    pub argmax_q: Distribution,
    pub max_kendall: u64,
}

fn validate(epsilon: &Rational, inner_resolution: u64) -> Result<()> {
    if *epsilon < Rational::zero() || *epsilon > Rational::one() {
        return Err(Error::range(format!(
            "epsilon must lie in [0, 1], got {}",
            rational::format_exact(epsilon)
        )));
    }
    if inner_resolution == 0 {
        return Err(Error::range("inner resolution must be at least 1"));
    }
    Ok(())
}

/// Both ball maxima in one pass. The argmax is the first maximizer in
/// search order (`p` itself, then lattice points by ascending numerators).
pub fn ball_extrema(p: &Distribution, epsilon: &Rational, inner_resolution: u64) -> Result<BallExtrema> {
    validate(epsilon, inner_resolution)?;
    match IntegerBall::new(p, epsilon, inner_resolution) {
        Some(ball) => Ok(ball.search(p)),
        None => ball_extrema_exact(p, epsilon, inner_resolution),
    }
}

pub fn max_delta_in_ball(
    p: &Distribution,
    epsilon: &Rational,
    inner_resolution: u64,
) -> Result<(Rational, Distribution)> {
    let e = ball_extrema(p, epsilon, inner_resolution)?;
    Ok((e.max_delta, e.argmax_q))
}

/// Largest `kendall_tau(canonical_optimal(p), G_q)` over lattice `q` in the
/// ball and over every `G_q` optimal for `q`.
pub fn max_kendall_in_ball(p: &Distribution, epsilon: &Rational, inner_resolution: u64) -> Result<u64> {
    Ok(ball_extrema(p, epsilon, inner_resolution)?.max_kendall)
}

/// Reference search in exact rationals: filters every lattice point by
/// `total_variation`, evaluates `mismatch_cost`, and takes the Kendall
/// maximum over the enumerated optimal set of each `q`.
pub fn ball_extrema_exact(
    p: &Distribution,
    epsilon: &Rational,
    inner_resolution: u64,
) -> Result<BallExtrema> {
    validate(epsilon, inner_resolution)?;
    let gp = canonical_optimal(p);
    let kendall_max = |q: &Distribution| -> Result<u64> {
        let mut best = 0;
        for gq in &optimal_set(q, DEFAULT_ENUMERATION_CAP)? {
            best = best.max(kendall_tau(&gp, &gq)?);
        }
        Ok(best)
    };
    let mut best = BallExtrema {
        max_delta: Rational::zero(),
        argmax_q: p.clone(),
        max_kendall: kendall_max(p)?,
    };
    let mut counts = vec![0u64; p.len()];
    let mut result = Ok(());
    for_each_composition(&mut counts, 0, inner_resolution, &mut |x| {
        if result.is_err() {
            return;
        }
        let mut step = || -> Result<()> {
            let q = Distribution::from_counts(x, inner_resolution)?;
            if total_variation(p, &q)? > *epsilon {
                return Ok(());
            }
            let delta = mismatch_cost(p, &q)?;
            if delta > best.max_delta {
                best.max_delta = delta;
                best.argmax_q = q.clone();
            }
            best.max_kendall = best.max_kendall.max(kendall_max(&q)?);
            Ok(())
        };
        result = step();
    });
    result.map(|_| best)
}

fn for_each_composition(x: &mut Vec<u64>, k: usize, left: u64, f: &mut dyn FnMut(&[u64])) {
    if k + 1 == x.len() {
        x[k] = left;
        f(x);
        return;
    }
    for c in 0..=left {
        x[k] = c;
        for_each_composition(x, k + 1, left - c, f);
    }
}

/// `p`, the lattice and the radius scaled to a common integer denominator.
struct IntegerBall {
    resolution: u64,
    /// lattice step in scaled units
    step: i64,
    /// `p_i` in scaled units
    scaled_p: Vec<i64>,
    /// largest admissible `|p_i - q_i|`, i.e. epsilon, in scaled units
    radius: i64,
    /// (i, j, p_i - p_j) for every pair with `p_i > p_j`
    gaps: Vec<(usize, usize, i64)>,
    /// (i, j) for every pair guessed `i` before `j` by `canonical_optimal(p)`
    ordered: Vec<(usize, usize)>,
    scale: BigInt,
}

impl IntegerBall {
    fn new(p: &Distribution, epsilon: &Rational, resolution: u64) -> Option<Self> {
        let mut scale = BigInt::from(resolution).lcm(epsilon.denom());
        for v in p.probs() {
            scale = scale.lcm(v.denom());
        }
        let limit = scale.to_i64().filter(|&s| s <= MAX_INTEGER_SCALE)?;
        let to_units = |v: &Rational| -> i64 {
            (v * &scale).to_integer().to_i64().expect("bounded by scale")
        };
        let scaled_p: Vec<i64> = p.probs().iter().map(to_units).collect();
        let n = p.len();
        let mut gaps = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if scaled_p[i] > scaled_p[j] {
                    gaps.push((i, j, scaled_p[i] - scaled_p[j]));
                }
            }
        }
        let order = canonical_optimal(p).order();
        let mut ordered = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 0..n {
            for b in a + 1..n {
                ordered.push((order[a], order[b]));
            }
        }
        Some(Self {
            resolution,
            step: limit / resolution as i64,
            radius: to_units(epsilon),
            scaled_p,
            gaps,
            ordered,
            scale,
        })
    }

    fn delta_units(&self, q: &[i64]) -> i64 {
        self.gaps.iter().filter(|&&(i, j, _)| q[i] < q[j]).map(|&(_, _, g)| g).sum()
    }

    /// Discordant pairs, counting every tie of `q` as discordant (the
    /// optimal set of `q` contains an order reversing each tie group).
    fn kendall(&self, q: &[i64]) -> u64 {
        self.ordered.iter().filter(|&&(i, j)| q[i] <= q[j]).count() as u64
    }

    fn search(&self, p: &Distribution) -> BallExtrema {
        let n = self.scaled_p.len();
        let mut best_delta = 0i64;
        let mut best_q: Option<Vec<u64>> = None;
        let mut best_kendall = self.kendall(&self.scaled_p);

        let mut x = vec![0u64; n];
        let mut units = vec![0i64; n];
        let suffix_p: Vec<i64> = (0..=n).map(|k| self.scaled_p[k..].iter().sum()).collect();
        self.walk(0, self.resolution, 2 * self.radius, &suffix_p, &mut x, &mut units, &mut |x, units| {
            let d = self.delta_units(units);
            if d > best_delta {
                best_delta = d;
                best_q = Some(x.to_vec());
            }
            best_kendall = best_kendall.max(self.kendall(units));
        });

        let argmax_q = match best_q {
            Some(x) => Distribution::from_counts(&x, self.resolution).expect("lattice point"),
            None => p.clone(),
        };
        BallExtrema {
            max_delta: Rational::new(BigInt::from(best_delta), self.scale.clone()),
            argmax_q,
            max_kendall: best_kendall,
        }
    }

    /// Visits lattice points with `|p_i - q_i| <= radius` for every `i` and
    /// `sum |p_i - q_i| <= 2 radius`, in ascending lexicographic order.
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        k: usize,
        left: u64,
        budget: i64,
        suffix_p: &[i64],
        x: &mut [u64],
        units: &mut [i64],
        visit: &mut dyn FnMut(&[u64], &[i64]),
    ) {
        let n = x.len();
        let pk = self.scaled_p[k];
        if k + 1 == n {
            let u = left as i64 * self.step;
            let dev = (pk - u).abs();
            if dev <= self.radius && dev <= budget {
                x[k] = left;
                units[k] = u;
                visit(x, units);
            }
            return;
        }
        // x_k * step within [pk - radius, pk + radius]
        let lo = (pk - self.radius).max(0);
        let lo = ((lo + self.step - 1) / self.step) as u64;
        let hi = (((pk + self.radius) / self.step) as u64).min(left);
        for c in lo..=hi {
            let u = c as i64 * self.step;
            let dev = (pk - u).abs();
            let remaining = budget - dev;
            if remaining < 0 {
                continue;
            }
            // the rest must absorb (left - c) with what budget remains
            let rest_mass = (left - c) as i64 * self.step;
            if (suffix_p[k + 1] - rest_mass).abs() > remaining {
                continue;
            }
            x[k] = c;
            units[k] = u;
            self.walk(k + 1, left - c, remaining, suffix_p, x, units, visit);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanCell {
    /// Barycentric numerators `(a, b, c)` with `a + b + c = resolution`.
    pub counts: [u64; 3],
    pub p: Distribution,
    #[serde(with = "rational::as_string")]
    pub max_delta: Rational,
    pub argmax_q: Distribution,
    pub max_kendall: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanGrid {
    pub resolution: u64,
    pub inner_resolution: u64,
    #[serde(with = "rational::as_string")]
    pub epsilon: Rational,
    pub cells: Vec<ScanCell>,
}

/// Number of barycentric cells at a resolution: `(r + 1)(r + 2) / 2`.
pub fn cell_count(resolution: u64) -> u64 {
    (resolution + 1) * (resolution + 2) / 2
}

/// Evaluates both ball maxima at every point `(a, b, c) / resolution` of
/// the 3-symbol simplex. Cells come back sorted by `(a, b, c)`; work is
/// spread over the current rayon pool without affecting the output.
pub fn scan_simplex(resolution: u64, epsilon: &Rational, inner_resolution: u64) -> Result<ScanGrid> {
    if resolution == 0 {
        return Err(Error::range("resolution must be at least 1"));
    }
    validate(epsilon, inner_resolution)?;
    let points: Vec<[u64; 3]> = (0..=resolution)
        .flat_map(|a| (0..=resolution - a).map(move |b| [a, b, resolution - a - b]))
        .collect();
    let cells = points
        .into_par_iter()
        .map(|counts| {
            let p = Distribution::from_counts(&counts, resolution)?;
            let e = ball_extrema(&p, epsilon, inner_resolution)?;
            Ok(ScanCell {
                counts,
                p,
                max_delta: e.max_delta,
                argmax_q: e.argmax_q,
                max_kendall: e.max_kendall,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScanGrid { resolution, inner_resolution, epsilon: epsilon.clone(), cells })
}

impl ScanGrid {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for cell in &self.cells {
            let probs = cell.p.probs();
            writeln!(
                out,
                "{},{},{},{},{}",
                format_significant(&probs[0], CSV_DIGITS),
                format_significant(&probs[1], CSV_DIGITS),
                format_significant(&probs[2], CSV_DIGITS),
                format_significant(&cell.max_delta, CSV_DIGITS),
                cell.max_kendall
            )?;
        }
        Ok(())
    }

    /// `{"schema":1,"resolution":..,"inner_resolution":..,"epsilon":"..","cells":N}`
    pub fn sidecar_json(&self) -> String {
        serde_json::json!({
            "schema": 1,
            "resolution": self.resolution,
            "inner_resolution": self.inner_resolution,
            "epsilon": rational::format_exact(&self.epsilon),
            "cells": self.cells.len(),
        })
        .to_string()
    }

    pub fn max_delta(&self) -> Rational {
        self.cells.iter().map(|c| &c.max_delta).max().cloned().unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleOptimal {
    pub p: Distribution,
    pub q: Distribution,
    #[serde(with = "rational::as_string")]
    pub delta: Rational,
}

/// A pair whose mismatch cost is `gamma * 2(n-1) * epsilon`, within a
/// factor `gamma` of the bound.
///
/// `p` moves `gamma * epsilon` of mass from the last symbol to the first
/// of the uniform distribution. `q` is the arithmetic progression
/// `1/n + (i - (n+1)/2) * eta` with `eta = 2(1 - gamma) epsilon / floor(n^2/4)`,
/// the largest step keeping `TV(p, q) <= epsilon`. It lands on the boundary,
/// so `delta / (2(n-1) TV(p, q))` is exactly `gamma` as well.
pub fn example_optimal(n: usize, epsilon: &Rational, gamma: &Rational) -> Result<ExampleOptimal> {
    if n < 2 {
        return Err(Error::range(format!("n must be at least 2, got {n}")));
    }
    if *gamma <= Rational::zero() || *gamma >= Rational::one() {
        return Err(Error::range("gamma must lie strictly between 0 and 1"));
    }
    let n_big = BigInt::from(n);
    let inv_n = Rational::new(BigInt::one(), n_big.clone());
    if *epsilon <= Rational::zero() || *epsilon > inv_n {
        return Err(Error::range("epsilon must lie in (0, 1/n]"));
    }
    let shift = gamma * epsilon;
    let mut p = vec![inv_n.clone(); n];
    p[0] = &inv_n + &shift;
    p[n - 1] = &inv_n - &shift;
    let p = Distribution::new(p)?;

    let floor_quarter = BigInt::from(n * n / 4);
    let eta = int(2) * (Rational::one() - gamma) * epsilon / Rational::from_integer(floor_quarter);
    let center = Rational::new(n_big + 1, BigInt::from(2));
    let q = Distribution::new(
        (1..=n)
            .map(|i| &inv_n + (Rational::from_integer(BigInt::from(i)) - &center) * &eta)
            .collect(),
    )?;
    debug_assert!(q.probs().windows(2).all(|w| w[0] < w[1]));
    debug_assert!(total_variation(&p, &q)? == *epsilon);
    let delta = mismatch_cost(&p, &q)?;
    Ok(ExampleOptimal { p, q, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::parse_distribution;
    use crate::rational::{int, ratio};

    fn d(text: &str) -> Distribution {
        parse_distribution(text).unwrap()
    }

    #[test]
    fn uniform_center_has_no_cost_but_full_reversal() {
        let u = Distribution::uniform(3).unwrap();
        for eps in [ratio(1, 100), ratio(1, 5), int(1)] {
            let e = ball_extrema(&u, &eps, 60).unwrap();
            assert_eq!(e.max_delta, int(0));
            assert_eq!(e.max_kendall, 3);
        }
    }

    #[test]
    fn example_family_center() {
        let p = Distribution::new(vec![
            ratio(1, 3) + ratio(1, 10),
            ratio(1, 3),
            ratio(1, 3) - ratio(1, 10),
        ])
        .unwrap();
        let (delta, q) = max_delta_in_ball(&p, &ratio(1, 5), 400).unwrap();
        assert_eq!(delta, ratio(2, 5));
        assert!(total_variation(&p, &q).unwrap() <= ratio(1, 5));
        assert_eq!(mismatch_cost(&p, &q).unwrap(), delta);
    }

    #[test]
    fn corner_cannot_be_inverted() {
        let p = d("[1,0,0]");
        let (delta, _) = max_delta_in_ball(&p, &ratio(1, 5), 400).unwrap();
        assert_eq!(delta, int(0));
        assert!(delta <= ratio(4, 5));
    }

    #[test]
    fn kendall_examples() {
        assert_eq!(max_kendall_in_ball(&d("[0.5,0.3,0.2]"), &int(0), 100).unwrap(), 0);
        // p off the inner lattice: only p itself is in the ball
        assert_eq!(max_kendall_in_ball(&d("[0.5,0.3,0.2]"), &int(0), 7).unwrap(), 0);
        assert_eq!(max_kendall_in_ball(&d("[0.6,0.3,0.1]"), &ratio(1, 20), 400).unwrap(), 0);
    }

    #[test]
    fn range_errors() {
        let p = Distribution::uniform(3).unwrap();
        assert_eq!(ball_extrema(&p, &ratio(-1, 10), 10).unwrap_err().code(), "RANGE");
        assert_eq!(ball_extrema(&p, &ratio(11, 10), 10).unwrap_err().code(), "RANGE");
        assert_eq!(ball_extrema(&p, &ratio(1, 10), 0).unwrap_err().code(), "RANGE");
        assert_eq!(scan_simplex(0, &ratio(1, 5), 10).unwrap_err().code(), "RANGE");
    }

    #[test]
    fn integer_search_matches_exact_search() {
        let cases = [
            "[0.5,0.3,0.2]",
            "[1/3,1/3,1/3]",
            "[0.6,0.2,0.2]",
            "[0,0.5,0.5]",
            "[0.45,0.1,0.45]",
            "[0.4,0.3,0.2,0.1]",
            "[0.25,0.25,0.3,0.2]",
        ];
        for text in cases {
            let p = d(text);
            for eps in [int(0), ratio(1, 20), ratio(1, 5), ratio(1, 2)] {
                for inner in [7, 12, 20] {
                    let fast = ball_extrema(&p, &eps, inner).unwrap();
                    let exact = ball_extrema_exact(&p, &eps, inner).unwrap();
                    assert_eq!(fast, exact, "p={text} eps={eps} inner={inner}");
                }
            }
        }
    }

    #[test]
    fn scan_grid_basics() {
        let grid = scan_simplex(1, &ratio(1, 5), 20).unwrap();
        let counts: Vec<_> = grid.cells.iter().map(|c| c.counts).collect();
        assert_eq!(counts, vec![[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        let grid = scan_simplex(6, &ratio(1, 5), 30).unwrap();
        assert_eq!(grid.cells.len() as u64, cell_count(6));
        let centroid = grid.cells.iter().find(|c| c.counts == [2, 2, 2]).unwrap();
        assert_eq!(centroid.max_delta, int(0));
        let mut csv = Vec::new();
        grid.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("p1,p2,p3,max_delta,max_kendall\n0,0,1,0,"));
        assert_eq!(text.lines().count(), 1 + 28);
        assert!(grid.sidecar_json().contains(r#""cells":28"#));
    }

    #[test]
    fn example_optimal_values() {
        let e = example_optimal(5, &ratio(1, 10), &ratio(1, 2)).unwrap();
        assert_eq!(e.delta, ratio(2, 5));
        let e = example_optimal(3, &ratio(1, 3), &ratio(99, 100)).unwrap();
        assert_eq!(e.delta, ratio(99, 100) * ratio(4, 3));
        let e = example_optimal(2, &ratio(1, 2), &ratio(1, 2)).unwrap();
        assert_eq!(e.p, d("[0.75,0.25]"));
        assert_eq!(e.delta, ratio(1, 2));
        assert_eq!(crate::oracle::brute_force_delta(&e.p, &e.q).unwrap(), e.delta);
    }

    #[test]
    fn example_optimal_ranges() {
        let half = ratio(1, 2);
        assert_eq!(example_optimal(3, &ratio(1, 2), &half).unwrap_err().code(), "RANGE");
        assert_eq!(example_optimal(3, &int(0), &half).unwrap_err().code(), "RANGE");
        assert_eq!(example_optimal(3, &ratio(1, 4), &int(1)).unwrap_err().code(), "RANGE");
        assert_eq!(example_optimal(3, &ratio(1, 4), &int(0)).unwrap_err().code(), "RANGE");
        assert_eq!(example_optimal(1, &ratio(1, 4), &half).unwrap_err().code(), "RANGE");
    }
}
