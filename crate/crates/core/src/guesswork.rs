//! Guessing functions, expected guesswork, optimal guessing sets and the
//! expected cost of guessing under mismatch.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::distributions::Distribution;
use crate::error::{check_dims, Error, Result};
use crate::rational::Rational;

/// Default cap on how many optimal guessing functions [`optimal_set`]
/// will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

/// A bijection `[n] -> [n]`: `rank(i)` is the guess number at which the
/// 0-based symbol `i` is tried. Ranks are stored 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GuessingFunction {
    ranks: Vec<usize>,
}

impl GuessingFunction {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut seen = vec![false; n];
        for &r in &ranks {
            if r == 0 || r > n {
                return Err(Error::NotAPermutation { n, detail: format!("rank {r} out of range") });
            }
            if std::mem::replace(&mut seen[r - 1], true) {
                return Err(Error::NotAPermutation { n, detail: format!("rank {r} repeated") });
            }
        }
        Ok(Self { ranks })
    }

    pub fn identity(n: usize) -> Self {
        Self { ranks: (1..=n).collect() }
    }

    pub fn reverse(n: usize) -> Self {
        Self { ranks: (1..=n).rev().collect() }
    }

    /// Builds the function that guesses the 0-based symbols in `order`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut ranks = vec![0; n];
        for (slot, &symbol) in order.iter().enumerate() {
            if symbol >= n || ranks[symbol] != 0 {
                return Err(Error::NotAPermutation { n, detail: format!("order {order:?}") });
            }
            ranks[symbol] = slot + 1;
        }
        Ok(Self { ranks })
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// 1-based rank of the 0-based symbol `i`.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// 0-based symbols in guessing order (the inverse permutation).
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.ranks.len()];
        for (symbol, &r) in self.ranks.iter().enumerate() {
            order[r - 1] = symbol;
        }
        order
    }

    /// Exchanges the symbols guessed at 1-based slots `slot` and `slot + 1`
    /// (left composition with an adjacent transposition).
    pub fn swap_slots(&mut self, slot: usize) {
        assert!(slot >= 1 && slot < self.ranks.len(), "slot {slot} out of range");
        for r in &mut self.ranks {
            if *r == slot {
                *r = slot + 1;
            } else if *r == slot + 1 {
                *r = slot;
            }
        }
    }
}

impl TryFrom<Vec<usize>> for GuessingFunction {
    type Error = Error;

    fn try_from(ranks: Vec<usize>) -> Result<Self> {
        Self::new(ranks)
    }
}

impl From<GuessingFunction> for Vec<usize> {
    fn from(g: GuessingFunction) -> Self {
        g.ranks
    }
}

/// JSON form, e.g. `[1,2,4,3]`.
impl fmt::Display for GuessingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, r) in self.ranks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for GuessingFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let body = t.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(t);
        if body.trim().is_empty() {
            return Err(Error::Empty);
        }
        let ranks = body
            .split(',')
            .map(|tok| {
                tok.trim().parse::<usize>().map_err(|_| Error::Parse {
                    token: tok.to_string(),
                    reason: "expected a positive integer rank".to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(ranks)
    }
}

/// `E_p[G(X)] = sum_i p_i * G(i)`.
pub fn expected_guesswork(g: &GuessingFunction, p: &Distribution) -> Result<Rational> {
    check_dims(g.len(), p.len())?;
    Ok(p.probs()
        .iter()
        .zip(g.ranks())
        .map(|(pi, &r)| pi * BigInt::from(r))
        .sum())
}

/// Symbols grouped by equal probability, groups in decreasing probability
/// order, each group in ascending symbol order.
fn tie_groups(p: &Distribution) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| p.prob(b).cmp(p.prob(a)).then(a.cmp(&b)));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for s in order {
        match groups.last_mut() {
            Some(g) if p.prob(g[0]) == p.prob(s) => g.push(s),
            _ => groups.push(vec![s]),
        }
    }
    groups
}

/// The optimal guessing function that breaks probability ties by
/// ascending symbol index.
pub fn canonical_optimal(p: &Distribution) -> GuessingFunction {
    let order: Vec<usize> = tie_groups(p).into_iter().flatten().collect();
    GuessingFunction::from_order(&order).expect("sorted symbols form a permutation")
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Number of optimal guessing functions: the product of `size!` over the
/// groups of equal probability.
pub fn optimal_count(p: &Distribution) -> BigUint {
    tie_groups(p).iter().map(|g| factorial(g.len())).product()
}

/// The set of optimal guessing functions for a distribution.
#[derive(Debug, Clone)]
pub struct OptimalSet {
    groups: Vec<Vec<usize>>,
    count: BigUint,
}

impl OptimalSet {
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    /// Symbols of equal probability, in guessing order.
    pub fn tie_groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn contains(&self, g: &GuessingFunction) -> bool {
        if g.len() != self.groups.iter().map(Vec::len).sum::<usize>() {
            return false;
        }
        let mut start = 0;
        self.groups.iter().all(|group| {
            let lo = start + 1;
            start += group.len();
            group.iter().all(|&s| (lo..=start).contains(&g.rank(s)))
        })
    }

    pub fn iter(&self) -> OptimalIter<'_> {
        OptimalIter { set: self, current: Some(self.groups.clone()) }
    }
}

impl<'a> IntoIterator for &'a OptimalSet {
    type Item = GuessingFunction;
    type IntoIter = OptimalIter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// Yields every optimal function once: an odometer over the permutations
/// of each tie group, last group fastest.
pub struct OptimalIter<'a> {
    set: &'a OptimalSet,
    current: Option<Vec<Vec<usize>>>,
}

impl Iterator for OptimalIter<'_> {
    type Item = GuessingFunction;

    fn next(&mut self) -> Option<GuessingFunction> {
        let groups = self.current.as_mut()?;
        let order: Vec<usize> = groups.iter().flatten().copied().collect();
        let item = GuessingFunction::from_order(&order).expect("valid order");

        let mut advanced = false;
        for (k, group) in groups.iter_mut().enumerate().rev() {
            if next_permutation(group) {
                advanced = true;
                break;
            }
            // wrapped around to ascending; restore and carry
            group.clone_from(&self.set.groups[k]);
        }
        if !advanced {
            self.current = None;
        }
        Some(item)
    }
}

/// Advances `v` to its next lexicographic permutation. Returns false (and
/// sorts `v` ascending) after the last one.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The optimal guessing set of `p`. Fails with `ENUMERATION_TOO_LARGE`
/// (carrying the exact count) when the set has more than `cap` members.
pub fn optimal_set(p: &Distribution, cap: u64) -> Result<OptimalSet> {
    if cap == 0 {
        return Err(Error::range("enumeration cap must be at least 1"));
    }
    let groups = tie_groups(p);
    let count: BigUint = groups.iter().map(|g| factorial(g.len())).product();
    if count.to_u64().is_none_or(|c| c > cap) {
        return Err(Error::EnumerationTooLarge { count, cap });
    }
    Ok(OptimalSet { groups, count })
}

/// `E_p[G2 - G1]`, the expected cost of `g2` over `g1`. Signed.
pub fn expected_cost(
    g1: &GuessingFunction,
    g2: &GuessingFunction,
    p: &Distribution,
) -> Result<Rational> {
    check_dims(g1.len(), g2.len())?;
    check_dims(g1.len(), p.len())?;
    Ok(p.probs()
        .iter()
        .zip(g1.ranks().iter().zip(g2.ranks()))
        .map(|(pi, (&a, &b))| pi * (BigInt::from(b) - BigInt::from(a)))
        .sum())
}

/// Expected cost of guessing under mismatch, `delta(p, q)`: the least
/// expected excess guesswork, under `p`, of a function optimal for `q`.
///
/// Evaluated in closed form as the sum of `p_i - p_j` over the pairs with
/// `p_i > p_j` and `q_i < q_j`. Both comparisons are strict; pairs tied in
/// `q` can always be ordered the way `p` prefers.
pub fn mismatch_cost(p: &Distribution, q: &Distribution) -> Result<Rational> {
    check_dims(p.len(), q.len())?;
    let (pp, qp) = (p.probs(), q.probs());
    let mut total = Rational::zero();
    for i in 0..pp.len() {
        for j in 0..pp.len() {
            if pp[i] > pp[j] && qp[i] < qp[j] {
                total += &pp[i] - &pp[j];
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::parse_distribution;
    use crate::rational::{int, ratio};
    use std::collections::HashSet;

    fn d(text: &str) -> Distribution {
        parse_distribution(text).unwrap()
    }

    fn g(ranks: &[usize]) -> GuessingFunction {
        GuessingFunction::new(ranks.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_permutations() {
        assert_eq!(GuessingFunction::new(vec![1, 1]).unwrap_err().code(), "NOT_A_PERMUTATION");
        assert_eq!(GuessingFunction::new(vec![0, 1]).unwrap_err().code(), "NOT_A_PERMUTATION");
        assert_eq!(GuessingFunction::new(vec![1, 3]).unwrap_err().code(), "NOT_A_PERMUTATION");
        assert_eq!(GuessingFunction::new(vec![]).unwrap_err().code(), "EMPTY");
        assert_eq!("[1,x]".parse::<GuessingFunction>().unwrap_err().code(), "PARSE");
    }

    #[test]
    fn text_and_json_forms() {
        let f: GuessingFunction = "[1,2,4,3]".parse().unwrap();
        assert_eq!(f, g(&[1, 2, 4, 3]));
        assert_eq!(f.to_string(), "[1,2,4,3]");
        assert_eq!(serde_json::to_string(&f).unwrap(), "[1,2,4,3]");
        let back: GuessingFunction = serde_json::from_str("[3,1,2]").unwrap();
        assert_eq!(back, g(&[3, 1, 2]));
        assert!(serde_json::from_str::<GuessingFunction>("[1,1]").is_err());
    }

    #[test]
    fn order_inverts_ranks() {
        let f = g(&[3, 1, 2]);
        assert_eq!(f.order(), vec![1, 2, 0]);
        assert_eq!(GuessingFunction::from_order(&f.order()).unwrap(), f);
    }

    #[test]
    fn expected_guesswork_examples() {
        let p = d("[0.4,0.3,0.2,0.1]");
        assert_eq!(expected_guesswork(&GuessingFunction::identity(4), &p).unwrap(), int(2));
        let u = Distribution::uniform(5).unwrap();
        assert_eq!(expected_guesswork(&g(&[5, 3, 1, 2, 4]), &u).unwrap(), int(3));
        assert_eq!(
            expected_guesswork(&GuessingFunction::reverse(2), &d("[1,0]")).unwrap(),
            int(2)
        );
        assert_eq!(
            expected_guesswork(&g(&[1, 2]), &p).unwrap_err().code(),
            "DIMENSION_MISMATCH"
        );
    }

    #[test]
    fn canonical_optimal_examples() {
        assert_eq!(canonical_optimal(&d("[0.4,0.3,0.2,0.1]")), GuessingFunction::identity(4));
        assert_eq!(
            canonical_optimal(&Distribution::uniform(3).unwrap()),
            GuessingFunction::identity(3)
        );
        assert_eq!(canonical_optimal(&d("[0.1,0.2,0.7]")), g(&[3, 2, 1]));
        assert_eq!(canonical_optimal(&d("[0.2,0.4,0.2,0.2]")), g(&[2, 1, 3, 4]));
    }

    #[test]
    fn optimal_set_counts() {
        assert_eq!(optimal_set(&d("[0.4,0.3,0.2,0.1]"), 10).unwrap().count(), &1u32.into());
        let q = optimal_set(&d("[0.6,0.2,0.1,0.1]"), 10).unwrap();
        assert_eq!(q.count(), &2u32.into());
        let members: Vec<_> = q.iter().collect();
        assert_eq!(members, vec![g(&[1, 2, 3, 4]), g(&[1, 2, 4, 3])]);
        let u = optimal_set(&Distribution::uniform(3).unwrap(), 10).unwrap();
        assert_eq!(u.count(), &6u32.into());
        let all: HashSet<_> = u.iter().collect();
        assert_eq!(all.len(), 6);
    }

    #[test]
    fn optimal_set_respects_cap() {
        let u = Distribution::uniform(30).unwrap();
        match optimal_set(&u, DEFAULT_ENUMERATION_CAP).unwrap_err() {
            Error::EnumerationTooLarge { count, .. } => assert_eq!(count, factorial(30)),
            e => panic!("unexpected {e:?}"),
        }
        assert_eq!(optimal_count(&u), factorial(30));
        assert!(optimal_set(&Distribution::uniform(3).unwrap(), 5).is_err());
        assert!(optimal_set(&Distribution::uniform(3).unwrap(), 6).is_ok());
        assert_eq!(optimal_set(&u, 0).unwrap_err().code(), "RANGE");
    }

    #[test]
    fn optimal_set_iterates_mixed_groups() {
        // groups {2,3} (0.3), {1} (0.2), {0,4} (0.1)
        let p = d("[0.1,0.2,0.3,0.3,0.1]");
        let set = optimal_set(&p, 100).unwrap();
        let members: Vec<_> = set.iter().collect();
        assert_eq!(members.len(), 4);
        let unique: HashSet<_> = members.iter().cloned().collect();
        assert_eq!(unique.len(), 4);
        let best = expected_guesswork(&canonical_optimal(&p), &p).unwrap();
        for m in &members {
            assert!(set.contains(m));
            assert_eq!(expected_guesswork(m, &p).unwrap(), best);
        }
        assert!(!set.contains(&GuessingFunction::identity(5)));
    }

    #[test]
    fn expected_cost_examples() {
        let p = d("[0.4,0.3,0.2,0.1]");
        let id = GuessingFunction::identity(4);
        assert_eq!(expected_cost(&id, &g(&[1, 2, 4, 3]), &p).unwrap(), ratio(1, 10));
        assert_eq!(expected_cost(&id, &id, &p).unwrap(), int(0));
        let p3 = d("[0.5,0.3,0.2]");
        assert_eq!(
            expected_cost(&GuessingFunction::identity(3), &GuessingFunction::reverse(3), &p3)
                .unwrap(),
            ratio(3, 5)
        );
    }

    #[test]
    fn mismatch_cost_examples() {
        let p = d("[0.40,0.30,0.20,0.10]");
        let q = d("[0.60,0.20,0.10,0.10]");
        assert_eq!(mismatch_cost(&p, &q).unwrap(), int(0));
        assert_eq!(mismatch_cost(&p, &p).unwrap(), int(0));
        assert_eq!(mismatch_cost(&d("[0.5,0.3,0.2]"), &d("[0.2,0.3,0.5]")).unwrap(), ratio(3, 5));
        assert_eq!(mismatch_cost(&p, &Distribution::uniform(4).unwrap()).unwrap(), int(0));
        assert_eq!(mismatch_cost(&p, &d("[1]")).unwrap_err().code(), "DIMENSION_MISMATCH");
    }

    #[test]
    fn next_permutation_walks_all() {
        let mut v = vec![1, 2, 3, 4];
        let mut count = 1;
        while next_permutation(&mut v) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(v, vec![1, 2, 3, 4]);
    }
}
