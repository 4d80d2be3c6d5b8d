//! Brute-force ground truth and seeded randomized checks.
//!
//! Everything here enumerates from definitions (all `n!` guessing
//! functions, all lattice distributions) and shares no code path with the
//! closed forms it checks beyond the definitional sums of
//! [`expected_guesswork`] and [`expected_cost`].

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::designs::{bridge_pair, design_for, odd_design, Pair};
use crate::distributions::{total_variation, Distribution};
use crate::divergence::weighted_kendall;
use crate::error::{Error, Result};
use crate::guesswork::{
    canonical_optimal, expected_cost, expected_guesswork, mismatch_cost, GuessingFunction,
};
use crate::rational::{self, format_exact, Rational};

/// Largest alphabet for which `n!` enumeration is allowed.
pub const MAX_ENUMERATION_N: usize = 8;

/// Denominator used for random rational distributions.
pub const DEFAULT_DENOMINATOR: u64 = 1000;

fn enumeration_guard(n: usize) -> Result<()> {
    if n > MAX_ENUMERATION_N {
        Err(Error::TooLarge { n, limit: MAX_ENUMERATION_N })
    } else {
        Ok(())
    }
}

/// All `n!` permutations of `1..=n` as rank vectors (Heap's algorithm).
pub fn all_guessing_functions(n: usize) -> Result<Vec<GuessingFunction>> {
    enumeration_guard(n)?;
    let mut ranks: Vec<usize> = (1..=n).collect();
    let mut out = vec![GuessingFunction::new(ranks.clone())?];
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                ranks.swap(0, i);
            } else {
                ranks.swap(c[i], i);
            }
            out.push(GuessingFunction::new(ranks.clone())?);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(out)
}

/// Exact argmin of expected guesswork over all `n!` guessing functions.
pub fn brute_force_optimal_set(p: &Distribution) -> Result<BTreeSet<GuessingFunction>> {
    let all = all_guessing_functions(p.len())?;
    let costs = all
        .iter()
        .map(|g| expected_guesswork(g, p))
        .collect::<Result<Vec<_>>>()?;
    let best = costs.iter().min().expect("n >= 1").clone();
    Ok(all.into_iter().zip(costs).filter(|(_, c)| *c == best).map(|(g, _)| g).collect())
}

/// `delta(p, q)` from its definition: the minimum over the enumerated
/// optimal set of `q` of the expected cost over `canonical_optimal(p)`.
pub fn brute_force_delta(p: &Distribution, q: &Distribution) -> Result<Rational> {
    crate::error::check_dims(p.len(), q.len())?;
    let gp = canonical_optimal(p);
    brute_force_optimal_set(q)?
        .iter()
        .map(|gq| expected_cost(&gp, gq, p))
        .collect::<Result<Vec<_>>>()
        .map(|v| v.into_iter().min().expect("optimal set is non-empty"))
}

/// A uniformly random composition of `denominator` into `n` parts, scaled
/// to a distribution.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, denominator: u64) -> Distribution {
    let slots = denominator as usize + n - 1;
    let mut bars: Vec<usize> = rand::seq::index::sample(rng, slots, n - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(n);
    let mut prev = 0usize;
    for &b in &bars {
        counts.push((b - prev) as u64);
        prev = b + 1;
    }
    counts.push((slots - prev) as u64);
    Distribution::from_counts(&counts, denominator).expect("composition sums to denominator")
}

pub fn random_guessing_function<R: Rng + ?Sized>(rng: &mut R, n: usize) -> GuessingFunction {
    let mut ranks: Vec<usize> = (1..=n).collect();
    ranks.shuffle(rng);
    GuessingFunction::new(ranks).expect("shuffled identity")
}

/// Every distribution with entries in `{0, 1/d, ..., 1}` over `n` symbols,
/// in lexicographic order of numerators.
pub fn lattice_distributions(n: usize, denominator: u64) -> Vec<Distribution> {
    fn rec(n: usize, left: u64, prefix: &mut Vec<u64>, d: u64, out: &mut Vec<Distribution>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(Distribution::from_counts(prefix, d).expect("lattice point"));
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            rec(n, left - c, prefix, d, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 1 && denominator >= 1 {
        rec(n, denominator, &mut Vec::with_capacity(n), denominator, &mut out);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub check: String,
    pub trials: usize,
    /// Trials that could not be judged (e.g. a ratio with zero denominator).
    pub skipped: usize,
    pub failures: Vec<Failure>,
    #[serde(with = "rational::as_string")]
    pub max_discrepancy: Rational,
    /// Largest observed `delta / (2 (n-1) TV)`, where that ratio is defined.
    #[serde(with = "rational::option_as_string")]
    pub max_ratio: Option<Rational>,
}

impl OracleReport {
    fn new(check: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            trials: 0,
            skipped: 0,
            failures: Vec::new(),
            max_discrepancy: Rational::zero(),
            max_ratio: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Records one comparison; `discrepancy` is zero exactly when it passed.
    fn record(&mut self, input: impl FnOnce() -> String, expected: &Rational, got: &Rational, discrepancy: Rational) {
        self.trials += 1;
        if !discrepancy.is_zero() {
            self.failures.push(Failure {
                input: input(),
                expected: format_exact(expected),
                got: format_exact(got),
            });
            if discrepancy > self.max_discrepancy {
                self.max_discrepancy = discrepancy;
            }
        }
    }

    fn observe_ratio(&mut self, r: Rational) {
        if self.max_ratio.as_ref().is_none_or(|m| r > *m) {
            self.max_ratio = Some(r);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tie-rich (denominator 10) distributions on every fourth draw.
fn mixed_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, t: usize) -> Distribution {
    let d = if t % 4 == 3 { 10 } else { DEFAULT_DENOMINATOR };
    random_distribution(rng, n, d)
}

/// Expected cost equals the weighted Kendall divergence, exactly, on random
/// distributions and random pairs of guessing functions.
pub fn check_theorem1(n: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    if !(2..=7).contains(&n) {
        return Err(Error::range(format!("check_theorem1 needs 2 <= n <= 7, got {n}")));
    }
    let mut rng = rng_for(seed);
    let mut report = OracleReport::new(format!("cost-equals-kendall n={n}"));
    for t in 0..trials {
        let p = mixed_distribution(&mut rng, n, t);
        let g1 = random_guessing_function(&mut rng, n);
        let g2 = random_guessing_function(&mut rng, n);
        let cost = expected_cost(&g1, &g2, &p)?;
        let k = weighted_kendall(&p, &g1, &g2)?;
        let diff = (&cost - &k).abs();
        report.record(|| format!("p={p} g1={g1} g2={g2}"), &cost, &k, diff);
    }
    Ok(report)
}

/// `K_p(s1, s3) = K_p(s1, s2) + K_p(s2, s3)` on random triples.
pub fn check_corollary1(n: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    if n < 1 {
        return Err(Error::range("check_corollary1 needs n >= 1"));
    }
    let mut rng = rng_for(seed);
    let mut report = OracleReport::new(format!("kendall-triangle n={n}"));
    for t in 0..trials {
        let p = mixed_distribution(&mut rng, n, t);
        let s1 = random_guessing_function(&mut rng, n);
        let s2 = random_guessing_function(&mut rng, n);
        let s3 = random_guessing_function(&mut rng, n);
        let direct = weighted_kendall(&p, &s1, &s3)?;
        let via = weighted_kendall(&p, &s1, &s2)? + weighted_kendall(&p, &s2, &s3)?;
        let diff = (&direct - &via).abs();
        report.record(|| format!("p={p} s1={s1} s2={s2} s3={s3}"), &direct, &via, diff);
    }
    Ok(report)
}

fn tv_bound(n: usize, eps: &Rational) -> Rational {
    Rational::from_integer(BigInt::from(2 * (n as i64 - 1))) * eps
}

fn judge_tv_bound(report: &mut OracleReport, p: &Distribution, q: &Distribution) -> Result<()> {
    let eps = total_variation(p, q)?;
    let delta = mismatch_cost(p, q)?;
    let bound = tv_bound(p.len(), &eps);
    let excess = if delta > bound { &delta - &bound } else { Rational::zero() };
    if eps.is_zero() && excess.is_zero() {
        report.skipped += 1;
    } else if !eps.is_zero() {
        report.observe_ratio(&delta / &bound);
    }
    report.record(|| format!("p={p} q={q}"), &bound, &delta, excess);
    Ok(())
}

/// Random `q` near or far from `p`: independent draws, local mass moves,
/// and value swaps that force inversions.
fn companion<R: Rng + ?Sized>(rng: &mut R, p: &Distribution, mode: u32) -> Distribution {
    let n = p.len();
    let den = DEFAULT_DENOMINATOR;
    let mut counts: Vec<i64> = p
        .probs()
        .iter()
        .map(|v| {
            let scaled = v * Rational::from_integer(BigInt::from(den));
            i64::try_from(scaled.to_integer()).expect("lattice count")
        })
        .collect();
    match mode {
        0 => return random_distribution(rng, n, den),
        1 => {
            for _ in 0..rng.random_range(1..=3) {
                let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
                let amount = rng.random_range(0..=counts[a].min(60));
                counts[a] -= amount;
                counts[b] += amount;
            }
        }
        2 => {
            let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
            counts.swap(a, b);
        }
        _ => {
            // stay close but reverse one adjacent pair of p's order
            let order = canonical_optimal(p).order();
            if n >= 2 {
                let k = rng.random_range(0..n - 1);
                let (hi, lo) = (order[k], order[k + 1]);
                let gap = counts[hi] - counts[lo];
                let shift = gap / 2 + 1;
                if counts[hi] >= shift {
                    counts[hi] -= shift;
                    counts[lo] += shift;
                }
            }
        }
    }
    let counts: Vec<u64> = counts.into_iter().map(|c| c as u64).collect();
    Distribution::from_counts(&counts, den).expect("mass preserved")
}

/// `delta(p, q) <= 2(n-1) TV(p, q)` on random pairs, exactly.
pub fn check_theorem2(n: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    if n < 2 {
        return Err(Error::range(format!("check_theorem2 needs n >= 2, got {n}")));
    }
    let mut rng = rng_for(seed);
    let mut report = OracleReport::new(format!("tv-bound n={n}"));
    for t in 0..trials {
        let p = mixed_distribution(&mut rng, n, t);
        let mode = rng.random_range(0..4);
        let q = companion(&mut rng, &p, mode);
        judge_tv_bound(&mut report, &p, &q)?;
    }
    Ok(report)
}

/// The same judgement on caller-supplied pairs.
pub fn check_theorem2_pairs(pairs: &[(Distribution, Distribution)]) -> Result<OracleReport> {
    let mut report = OracleReport::new("tv-bound pairs");
    for (p, q) in pairs {
        crate::error::check_dims(p.len(), q.len())?;
        judge_tv_bound(&mut report, p, q)?;
    }
    Ok(report)
}

/// Closed-form `mismatch_cost` against [`brute_force_delta`] on every pair
/// of lattice distributions with the given denominator.
pub fn check_delta_sweep(n: usize, denominator: u64) -> Result<OracleReport> {
    enumeration_guard(n)?;
    let lattice = lattice_distributions(n, denominator);
    let mut report = OracleReport::new(format!("delta sweep n={n} d={denominator}"));
    // The optimal set of q is shared by every p; enumerate it once per q.
    let all = all_guessing_functions(n)?;
    for q in &lattice {
        let eq: Vec<Rational> = all.iter().map(|g| expected_guesswork(g, q)).collect::<Result<_>>()?;
        let best = eq.iter().min().expect("non-empty");
        let optimal_q: Vec<&GuessingFunction> =
            all.iter().zip(&eq).filter(|(_, c)| *c == best).map(|(g, _)| g).collect();
        for p in &lattice {
            let gp = canonical_optimal(p);
            let brute = optimal_q
                .iter()
                .map(|gq| expected_cost(&gp, gq, p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .min()
                .expect("non-empty");
            let closed = mismatch_cost(p, q)?;
            let diff = (&brute - &closed).abs();
            report.record(|| format!("p={p} q={q}"), &brute, &closed, diff);
        }
    }
    Ok(report)
}

/// Size of the brute-force optimal set against the tie-group product.
pub fn check_optimal_count_sweep(n: usize, denominator: u64) -> Result<OracleReport> {
    let mut report = OracleReport::new(format!("optimal count sweep n={n} d={denominator}"));
    for p in lattice_distributions(n, denominator) {
        let brute = brute_force_optimal_set(&p)?;
        let set = crate::guesswork::optimal_set(&p, u64::MAX)?;
        let fast: BTreeSet<GuessingFunction> = set.iter().collect();
        let count = Rational::from_integer(BigInt::from(set.count().clone()));
        let got = Rational::from_integer(BigInt::from(brute.len()));
        let diff = if brute == fast { (&count - &got).abs() } else { Rational::from_integer(1.into()) };
        report.record(|| format!("p={p}"), &count, &got, diff);
    }
    Ok(report)
}

/// `sum (p_i - p_j)` over oriented pairs (0-based symbols).
fn pair_gap_sum(p: &Distribution, pairs: &[Pair]) -> Rational {
    pairs.iter().map(|&(i, j)| p.prob(i) - p.prob(j)).sum()
}

/// Checks `sum_M (p_i - p_j) <= factor * TV(p, q)` on an instance whose
/// hypotheses hold; the hypotheses themselves are re-checked first.
fn judge_lemma(
    report: &mut OracleReport,
    p: &Distribution,
    q: &Distribution,
    pairs: &[Pair],
    factor: i64,
) -> Result<()> {
    let hypotheses = pairs.iter().all(|&(i, j)| p.prob(i) >= p.prob(j) && q.prob(i) <= q.prob(j));
    let eps = total_variation(p, q)?;
    let bound = Rational::from_integer(BigInt::from(factor)) * &eps;
    let sum = pair_gap_sum(p, pairs);
    let excess = if !hypotheses {
        Rational::from_integer(1.into())
    } else if sum > bound {
        &sum - &bound
    } else {
        Rational::zero()
    };
    report.record(|| format!("p={p} q={q} pairs={pairs:?}"), &bound, &sum, excess);
    Ok(())
}

/// Values of `q` laid out increasing along the decreasing-`p` order, so
/// `q_i <= q_j` whenever `p_i >= p_j` (ties in `p` broken by `order`).
fn anti_sorted(values: &mut [u64], order: &[usize], den: u64) -> Distribution {
    values.sort_unstable();
    let mut counts = vec![0; order.len()];
    for (&sym, &v) in order.iter().zip(values.iter()) {
        counts[sym] = v;
    }
    Distribution::from_counts(&counts, den).expect("permuted composition")
}

/// Near-uniform `q` strictly increasing along `order`.
fn near_uniform_increasing(order: &[usize]) -> Distribution {
    let n = order.len() as i64;
    let den = 2 * n * n * n;
    let mut counts = vec![0u64; order.len()];
    for (k, &sym) in order.iter().enumerate() {
        // 2n^2 + (2k - (n - 1)), always positive
        counts[sym] = (2 * n * n + 2 * k as i64 - (n - 1)) as u64;
    }
    Distribution::from_counts(&counts, den as u64).expect("sums to den")
}

/// Orders symbols by decreasing `p`, breaking ties with a random shuffle.
fn decreasing_order<R: Rng + ?Sized>(rng: &mut R, p: &Distribution) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.shuffle(rng);
    order.sort_by(|&a, &b| p.prob(b).cmp(p.prob(a)));
    order
}

/// The 2-epsilon lemma for a set of disjoint pairs.
pub fn check_even_lemma(trials: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = rng_for(seed);
    let mut report = OracleReport::new("disjoint-pair lemma");
    for t in 0..trials {
        let n = rng.random_range(2..=40usize);
        let den = if t % 3 == 2 { 10 } else { DEFAULT_DENOMINATOR };
        let p = random_distribution(&mut rng, n, den);
        let pair_count = rng.random_range(1..=n / 2);
        let pairs: Vec<Pair> = if t % 2 == 0 {
            // a round of a design under a random relabelling
            let design = design_for(n.max(2))?;
            let round = &design.rounds()[rng.random_range(0..design.rounds().len())];
            let mut names: Vec<usize> = (0..n).collect();
            names.shuffle(&mut rng);
            round.pairs().iter().map(|&(a, b)| (names[a - 1], names[b - 1])).collect()
        } else {
            let mut symbols: Vec<usize> = (0..n).collect();
            symbols.shuffle(&mut rng);
            symbols.chunks_exact(2).take(pair_count).map(|c| (c[0], c[1])).collect()
        };
        let order = decreasing_order(&mut rng, &p);
        let mut position = vec![0; n];
        for (k, &s) in order.iter().enumerate() {
            position[s] = k;
        }
        let oriented: Vec<Pair> = pairs
            .into_iter()
            .map(|(a, b)| if position[a] < position[b] { (a, b) } else { (b, a) })
            .collect();
        let q = if t % 5 == 4 {
            near_uniform_increasing(&order)
        } else {
            // random q, then swap values within each pair that points the wrong way
            let q = random_distribution(&mut rng, n, den);
            let mut probs = q.probs().to_vec();
            for &(i, j) in &oriented {
                if probs[i] > probs[j] {
                    probs.swap(i, j);
                }
            }
            Distribution::new(probs)?
        };
        judge_lemma(&mut report, &p, &q, &oriented, 2)?;
    }
    Ok(report)
}

/// The 4-epsilon lemma for two odd rounds joined by their bridge pair.
pub fn check_odd_lemma(trials: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = rng_for(seed);
    let mut report = OracleReport::new("bridge-pair lemma");
    for t in 0..trials {
        let n = 2 * rng.random_range(1..=20usize) + 1;
        let design = odd_design(n)?;
        let a = rng.random_range(1..=n);
        let b = loop {
            let b = rng.random_range(1..=n);
            if b != a {
                break b;
            }
        };
        let (ka, kb) = bridge_pair(&design, a, b)?;
        let mut names: Vec<usize> = (0..n).collect();
        names.shuffle(&mut rng);
        let mut raw: Vec<Pair> = design.round(a).expect("a in range").pairs().to_vec();
        raw.extend_from_slice(design.round(b).expect("b in range").pairs());
        raw.push((ka, kb));
        let raw: Vec<Pair> = raw.into_iter().map(|(x, y)| (names[x - 1], names[y - 1])).collect();

        let den = if t % 3 == 2 { 10 } else { DEFAULT_DENOMINATOR };
        let p = random_distribution(&mut rng, n, den);
        let order = decreasing_order(&mut rng, &p);
        let mut position = vec![0; n];
        for (k, &s) in order.iter().enumerate() {
            position[s] = k;
        }
        let oriented: Vec<Pair> = raw
            .into_iter()
            .map(|(x, y)| if position[x] < position[y] { (x, y) } else { (y, x) })
            .collect();
        let q = if t % 2 == 0 {
            near_uniform_increasing(&order)
        } else {
            let mut values: Vec<u64> = random_distribution(&mut rng, n, den)
                .probs()
                .iter()
                .map(|v| {
                    let c = v * Rational::from_integer(BigInt::from(den));
                    u64::try_from(c.to_integer()).expect("count")
                })
                .collect();
            anti_sorted(&mut values, &order, den)
        };
        judge_lemma(&mut report, &p, &q, &oriented, 4)?;
    }
    Ok(report)
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
    fn heap_enumerates_all_permutations() {
        for n in 1..=6 {
            let all = all_guessing_functions(n).unwrap();
            let unique: BTreeSet<_> = all.iter().cloned().collect();
            let fact: usize = (1..=n).product();
            assert_eq!(all.len(), fact);
            assert_eq!(unique.len(), fact);
        }
        assert_eq!(all_guessing_functions(9).unwrap_err().code(), "TOO_LARGE");
    }

    #[test]
    fn brute_force_optimal_examples() {
        let set = brute_force_optimal_set(&d("[0.6,0.2,0.1,0.1]")).unwrap();
        assert_eq!(set.len(), 2);
        assert_eq!(brute_force_optimal_set(&Distribution::uniform(4).unwrap()).unwrap().len(), 24);
        let set = brute_force_optimal_set(&d("[0.7,0.2,0.1]")).unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![GuessingFunction::identity(3)]);
        assert_eq!(
            brute_force_optimal_set(&Distribution::uniform(9).unwrap()).unwrap_err().code(),
            "TOO_LARGE"
        );
    }

    #[test]
    fn brute_force_delta_examples() {
        let p = d("[0.40,0.30,0.20,0.10]");
        let q = d("[0.60,0.20,0.10,0.10]");
        assert_eq!(brute_force_delta(&p, &q).unwrap(), int(0));
        assert_eq!(brute_force_delta(&p, &p).unwrap(), int(0));
        assert_eq!(brute_force_delta(&d("[0.5,0.3,0.2]"), &d("[0.2,0.3,0.5]")).unwrap(), ratio(3, 5));
    }

    #[test]
    fn random_distributions_are_compositions() {
        let mut rng = rng_for(7);
        for n in 1..10 {
            let p = random_distribution(&mut rng, n, 1000);
            assert_eq!(p.len(), n);
            for v in p.probs() {
                assert!((v * Rational::from_integer(1000.into())).is_integer());
            }
        }
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(lattice_distributions(3, 10).len(), 66);
        assert_eq!(lattice_distributions(4, 10).len(), 286);
        assert_eq!(lattice_distributions(1, 10).len(), 1);
    }

    #[test]
    fn cost_equals_kendall_small() {
        let r = check_theorem1(2, 10, 1).unwrap();
        assert!(r.passed());
        assert_eq!(r.trials, 10);
        assert!(check_theorem1(4, 300, 2).unwrap().passed());
        assert_eq!(check_theorem1(8, 1, 0).unwrap_err().code(), "RANGE");
        assert_eq!(check_theorem1(1, 1, 0).unwrap_err().code(), "RANGE");
    }

    #[test]
    fn reports_are_reproducible() {
        assert_eq!(check_theorem2(6, 200, 42).unwrap(), check_theorem2(6, 200, 42).unwrap());
        assert_eq!(check_theorem1(5, 50, 3).unwrap(), check_theorem1(5, 50, 3).unwrap());
    }

    #[test]
    fn tv_bound_pairs_ratio_and_skips() {
        let p = d("[0.4,0.3,0.3]");
        let r = check_theorem2_pairs(&[(p.clone(), p)]).unwrap();
        assert!(r.passed());
        assert_eq!(r.skipped, 1);
        assert_eq!(r.max_ratio, None);
        assert_eq!(check_theorem2(1, 1, 0).unwrap_err().code(), "RANGE");
    }

    #[test]
    fn seeded_fault_is_reported() {
        let mut r = OracleReport::new("fault");
        r.record(|| "x".into(), &int(1), &int(2), int(1));
        assert!(!r.passed());
        assert_eq!(r.failures[0].input, "x");
        assert_eq!(r.max_discrepancy, int(1));
    }

    #[test]
    fn pair_bound_checks_small() {
        let r = check_even_lemma(200, 5).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert!(check_odd_lemma(200, 5).unwrap().passed());
    }

    #[test]
    fn delta_sweep_small() {
        let r = check_delta_sweep(3, 6).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
        assert_eq!(r.trials, 28 * 28);
        assert!(check_optimal_count_sweep(3, 6).unwrap().passed());
    }
}
