//! Tournament designs and the certificates they yield for the bound
//! `delta(p, q) <= 2(n - 1) * TV(p, q)`.
//!
//! A design partitions all `C(n, 2)` symbol pairs into rounds of disjoint
//! pairs. Even `n` gives `n - 1` perfect rounds. Odd `n` gives `n` rounds,
//! each missing exactly one symbol, labelled so that round `k` misses
//! symbol `k`. Two odd rounds `a != b` are then joined by the bridge pair
//! `(a, b)`, and the pairs of round 1 are exactly the bridges that group
//! rounds `2..=n` into `(n - 1) / 2` bridge groups.
//!
//! Symbols and round indices are 1-based throughout this module.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::distributions::{total_variation, Distribution};
use crate::error::{check_dims, Error, Result};
use crate::guesswork::{canonical_optimal, mismatch_cost};
use crate::rational::{self, Rational};

/// An unordered symbol pair, stored with the smaller symbol first.
pub type Pair = (usize, usize);

fn normalized(a: usize, b: usize) -> Pair {
    (a.min(b), a.max(b))
}

/// A set of disjoint pairs: one round of a design.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PairSet {
    pairs: Vec<Pair>,
}

impl PairSet {
    /// Validating constructor: rejects `(i, i)` and any symbol used twice.
    pub fn new(pairs: Vec<Pair>) -> Result<Self> {
        let set = Self::from_pairs_unchecked(pairs);
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &set.pairs {
            if a == b {
                return Err(Error::range(format!("pair ({a},{b}) repeats a symbol")));
            }
            if !seen.insert(a) || !seen.insert(b) {
                return Err(Error::range(format!("pairs {:?} are not disjoint", set.pairs)));
            }
        }
        Ok(set)
    }

    /// Normalizes orientation but checks nothing; [`verify_design`]
    /// reports whatever is wrong.
    pub fn from_pairs_unchecked(pairs: Vec<Pair>) -> Self {
        Self { pairs: pairs.into_iter().map(|(a, b)| normalized(a, b)).collect() }
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains_symbol(&self, s: usize) -> bool {
        self.pairs.iter().any(|&(a, b)| a == s || b == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TournamentDesign {
    n: usize,
    parity: Parity,
    rounds: Vec<PairSet>,
}

impl TournamentDesign {
    /// Wraps arbitrary rounds without validation.
    pub fn from_rounds(n: usize, rounds: Vec<PairSet>) -> Self {
        Self { n, parity: Parity::of(n), rounds }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn rounds(&self) -> &[PairSet] {
        &self.rounds
    }

    /// 1-based round access.
    pub fn round(&self, k: usize) -> Option<&PairSet> {
        k.checked_sub(1).and_then(|i| self.rounds.get(i))
    }

    /// Symbols absent from the 1-based round `k`.
    pub fn missing_symbols(&self, k: usize) -> Vec<usize> {
        match self.round(k) {
            Some(round) => (1..=self.n).filter(|&s| !round.contains_symbol(s)).collect(),
            None => Vec::new(),
        }
    }

    /// For odd designs, round index -> the symbol it omits (only rounds
    /// that omit exactly one symbol appear).
    pub fn bridge_labels(&self) -> BTreeMap<usize, usize> {
        if self.parity == Parity::Even {
            return BTreeMap::new();
        }
        (1..=self.rounds.len())
            .filter_map(|k| match self.missing_symbols(k).as_slice() {
                &[s] => Some((k, s)),
                _ => None,
            })
            .collect()
    }

    /// `{"n":5,"parity":"odd","rounds":[[[2,5],[3,4]],...]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("design serializes")
    }
}

impl fmt::Display for TournamentDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, round) in self.rounds.iter().enumerate() {
            write!(f, "M_{}:", k + 1)?;
            for (a, b) in round.pairs() {
                write!(f, " ({a},{b})")?;
            }
            if self.parity == Parity::Odd {
                let missing = self.missing_symbols(k + 1);
                if let [s] = missing.as_slice() {
                    write!(f, "  [missing {s}]")?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Circle method with symbol `n` fixed and `1..n-1` rotating.
pub fn even_design(n: usize) -> Result<TournamentDesign> {
    if n % 2 == 1 {
        return Err(Error::Parity { n });
    }
    if n < 2 {
        return Err(Error::range(format!("even design needs n >= 2, got {n}")));
    }
    let m = n - 1;
    let rounds = (0..m)
        .map(|r| {
            let mut pairs = vec![normalized(r + 1, n)];
            for k in 1..n / 2 {
                pairs.push(normalized((r + k) % m + 1, (r + m - k) % m + 1));
            }
            PairSet { pairs }
        })
        .collect();
    Ok(TournamentDesign::from_rounds(n, rounds))
}

/// Circle method on all `n` symbols: round `k` pivots on symbol `k`, which
/// sits out, and pairs `k + d` with `k - d` (mod `n`).
pub fn odd_design(n: usize) -> Result<TournamentDesign> {
    if n % 2 == 0 {
        return Err(Error::Parity { n });
    }
    if n < 3 {
        return Err(Error::range(format!("odd design needs n >= 3, got {n}")));
    }
    let rounds = (0..n)
        .map(|k| PairSet {
            pairs: (1..=(n - 1) / 2)
                .map(|d| normalized((k + d) % n + 1, (k + n - d) % n + 1))
                .collect(),
        })
        .collect();
    Ok(TournamentDesign::from_rounds(n, rounds))
}

/// The parity-appropriate design on `n >= 2` symbols.
pub fn design_for(n: usize) -> Result<TournamentDesign> {
    match Parity::of(n) {
        Parity::Even => even_design(n),
        Parity::Odd => odd_design(n),
    }
}

/// The bridge pair `(k_a, k_b)` of two rounds of an odd design: the
/// symbols missing from rounds `a` and `b` respectively.
pub fn bridge_pair(d: &TournamentDesign, a: usize, b: usize) -> Result<Pair> {
    if d.parity != Parity::Odd {
        return Err(Error::Parity { n: d.n });
    }
    if a == b {
        return Err(Error::SameRound(a));
    }
    let lone_missing = |k: usize| -> Result<usize> {
        if d.round(k).is_none() {
            return Err(Error::range(format!("round {k} outside 1..={}", d.rounds.len())));
        }
        match d.missing_symbols(k).as_slice() {
            &[s] => Ok(s),
            other => Err(Error::range(format!(
                "round {k} must miss exactly one symbol, misses {other:?}"
            ))),
        }
    };
    let (ka, kb) = (lone_missing(a)?, lone_missing(b)?);
    if ka == kb {
        return Err(Error::range(format!("rounds {a} and {b} miss the same symbol {ka}")));
    }
    Ok((ka, kb))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RoundCount { expected: usize, got: usize },
    RoundSize { round: usize, expected: usize, got: usize },
    InvalidPair { round: usize, pair: Pair },
    SymbolRepeated { round: usize, symbol: usize },
    DuplicatePair { pair: Pair, rounds: Vec<usize> },
    UncoveredPair { pair: Pair },
    MissingSymbols { round: usize, missing: Vec<usize> },
    SharedMissingSymbol { symbol: usize, rounds: Vec<usize> },
    BridgeLabel { round: usize, missing: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RoundCount { expected, got } => {
                write!(f, "expected {expected} rounds, found {got}")
            }
            Violation::RoundSize { round, expected, got } => {
                write!(f, "round {round} has {got} pairs, expected {expected}")
            }
            Violation::InvalidPair { round, pair } => {
                write!(f, "round {round} has invalid pair ({},{})", pair.0, pair.1)
            }
            Violation::SymbolRepeated { round, symbol } => {
                write!(f, "symbol {symbol} appears more than once in round {round}")
            }
            Violation::DuplicatePair { pair, rounds } => {
                write!(f, "pair ({},{}) is covered by rounds {rounds:?}", pair.0, pair.1)
            }
            Violation::UncoveredPair { pair } => {
                write!(f, "pair ({},{}) is never covered", pair.0, pair.1)
            }
            Violation::MissingSymbols { round, missing } => {
                write!(f, "round {round} misses symbols {missing:?}, expected exactly one")
            }
            Violation::SharedMissingSymbol { symbol, rounds } => {
                write!(f, "symbol {symbol} is missing from rounds {rounds:?}")
            }
            Violation::BridgeLabel { round, missing } => {
                write!(f, "round {round} misses symbol {missing} instead of {round}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub parity: Parity,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a design's covering and labelling properties. An empty report
/// means the design is valid.
pub fn verify_design(d: &TournamentDesign) -> VerificationReport {
    let n = d.n;
    let mut violations = Vec::new();
    let (expected_rounds, expected_size) = match d.parity {
        Parity::Even => (n.saturating_sub(1), n / 2),
        Parity::Odd => (n, n.saturating_sub(1) / 2),
    };
    if d.rounds.len() != expected_rounds {
        violations.push(Violation::RoundCount { expected: expected_rounds, got: d.rounds.len() });
    }

    let mut coverage: BTreeMap<Pair, Vec<usize>> = BTreeMap::new();
    for (idx, round) in d.rounds.iter().enumerate() {
        let k = idx + 1;
        if round.len() != expected_size {
            violations.push(Violation::RoundSize { round: k, expected: expected_size, got: round.len() });
        }
        let mut uses = vec![0usize; n + 1];
        for &pair in round.pairs() {
            let (a, b) = pair;
            if a == b || a == 0 || b > n {
                violations.push(Violation::InvalidPair { round: k, pair });
                continue;
            }
            uses[a] += 1;
            uses[b] += 1;
            coverage.entry(pair).or_default().push(k);
        }
        for (symbol, &c) in uses.iter().enumerate() {
            if c > 1 {
                violations.push(Violation::SymbolRepeated { round: k, symbol });
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            match coverage.get(&(i, j)) {
                None => violations.push(Violation::UncoveredPair { pair: (i, j) }),
                Some(rounds) if rounds.len() > 1 => violations
                    .push(Violation::DuplicatePair { pair: (i, j), rounds: rounds.clone() }),
                _ => {}
            }
        }
    }

    if d.parity == Parity::Odd {
        let mut missing_from: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 1..=d.rounds.len() {
            match d.missing_symbols(k).as_slice() {
                &[s] => {
                    missing_from.entry(s).or_default().push(k);
                    if s != k {
                        violations.push(Violation::BridgeLabel { round: k, missing: s });
                    }
                }
                other => violations
                    .push(Violation::MissingSymbols { round: k, missing: other.to_vec() }),
            }
        }
        for (symbol, rounds) in missing_from {
            if rounds.len() > 1 {
                violations.push(Violation::SharedMissingSymbol { symbol, rounds });
            }
        }
    }

    VerificationReport { n, parity: d.parity, violations }
}

/// The bridge groups of a valid odd design: for each pair `(i, j)` of
/// round 1, the pairs of rounds `i`, `j` and the bridge `(i, j)` itself.
/// Together they partition all `C(n, 2)` pairs.
pub fn bridge_groups(d: &TournamentDesign) -> Result<Vec<(Pair, Vec<Pair>)>> {
    if d.parity != Parity::Odd {
        return Err(Error::Parity { n: d.n });
    }
    let first = d.round(1).ok_or_else(|| Error::range("design has no rounds"))?;
    first
        .pairs()
        .iter()
        .map(|&(i, j)| {
            if bridge_pair(d, i, j)? != (i, j) {
                return Err(Error::range(format!("({i},{j}) is not the bridge of its rounds")));
            }
            let mut pairs: Vec<Pair> = d.round(i).expect("checked").pairs().to_vec();
            pairs.extend_from_slice(d.round(j).expect("checked").pairs());
            pairs.push((i, j));
            Ok(((i, j), pairs))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupStatus {
    /// Every pair `(i, j)` of the group has `q_i <= q_j`, so the group sum
    /// is bounded by the lemma.
    LemmaApplies,
    /// Some pair has `q_i > q_j`; the raw sum is recorded unbounded.
    HypothesisSlack,
}

/// One round (even `n`) or bridge group (odd `n`) of a certificate. Pairs
/// are in original symbols, oriented so the first has the larger (or
/// equal) probability under `p`.
#[derive(Debug, Clone, Serialize)]
pub struct GroupCertificate {
    pub label: String,
    pub pairs: Vec<Pair>,
    /// `sum (p_i - p_j)` over all pairs of the group.
    #[serde(with = "rational::as_string")]
    pub sum: Rational,
    /// The same sum restricted to pairs with `p_i > p_j` and `q_i < q_j`;
    /// these are the group's share of `delta(p, q)`.
    #[serde(with = "rational::as_string")]
    pub inverted_sum: Rational,
    pub status: GroupStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCertificate {
    pub n: usize,
    pub p: Distribution,
    pub q: Distribution,
    /// `TV(p, q)`.
    #[serde(with = "rational::as_string")]
    pub epsilon: Rational,
    /// Original 0-based symbol at each position of the non-increasing
    /// relabelling of `p`.
    pub relabel: Vec<usize>,
    pub parity: Parity,
    /// `2 * epsilon` for rounds, `4 * epsilon` for bridge groups.
    #[serde(with = "rational::as_string")]
    pub lemma_bound_each: Rational,
    pub groups: Vec<GroupCertificate>,
    /// `sum_{i<j} (p_i - p_j)` in the relabelled order.
    #[serde(with = "rational::as_string")]
    pub total: Rational,
    #[serde(with = "rational::as_string")]
    pub delta: Rational,
    /// `2 (n - 1) epsilon`.
    #[serde(with = "rational::as_string")]
    pub bound: Rational,
    /// `q` strictly increases along the relabelling, so `delta == total`
    /// and the per-group lemma bounds add up to `bound`.
    pub worst_case_ordering: bool,
}

impl BoundCertificate {
    pub fn per_group_sums(&self) -> Vec<Rational> {
        self.groups.iter().map(|g| g.sum.clone()).collect()
    }

    /// Re-derives every claim of the certificate. Returns a description of
    /// the first failed check.
    pub fn check(&self) -> std::result::Result<(), String> {
        let sum: Rational = self.groups.iter().map(|g| &g.sum).sum();
        if sum != self.total {
            return Err(format!("group sums add to {sum}, total is {}", self.total));
        }
        let inverted: Rational = self.groups.iter().map(|g| &g.inverted_sum).sum();
        if inverted != self.delta {
            return Err(format!("inverted sums add to {inverted}, delta is {}", self.delta));
        }
        for g in &self.groups {
            if g.inverted_sum > self.lemma_bound_each {
                return Err(format!("group {} inverted sum exceeds the lemma bound", g.label));
            }
            if g.status == GroupStatus::LemmaApplies && g.sum > self.lemma_bound_each {
                return Err(format!("group {} sum exceeds the lemma bound", g.label));
            }
        }
        if self.delta > self.total {
            return Err("delta exceeds the total pair sum".to_string());
        }
        if self.worst_case_ordering && (self.delta != self.total || self.total > self.bound) {
            return Err("worst-case chain does not close".to_string());
        }
        if self.delta > self.bound {
            return Err(format!("delta {} exceeds bound {}", self.delta, self.bound));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Builds the design-based certificate for `delta(p, q) <= 2(n-1) TV(p, q)`.
///
/// Symbols are relabelled so `p` is non-increasing (ties by index), then
/// the pairs are grouped by the parity-appropriate design: rounds for even
/// `n`, bridge groups for odd `n`.
pub fn bound_certificate(p: &Distribution, q: &Distribution) -> Result<BoundCertificate> {
    check_dims(p.len(), q.len())?;
    let n = p.len();
    if n < 2 {
        return Err(Error::range(format!("certificate needs n >= 2, got {n}")));
    }
    let relabel = canonical_optimal(p).order();
    let design = design_for(n)?;
    let epsilon = total_variation(p, q)?;
    let delta = mismatch_cost(p, q)?;

    // (label, pairs in relabelled 1-based positions)
    let (lemma_factor, raw_groups): (i64, Vec<(String, Vec<Pair>)>) = match design.parity() {
        Parity::Even => (
            2,
            design
                .rounds()
                .iter()
                .enumerate()
                .map(|(k, r)| (format!("M_{}", k + 1), r.pairs().to_vec()))
                .collect(),
        ),
        Parity::Odd => (
            4,
            bridge_groups(&design)?
                .into_iter()
                .map(|((i, j), pairs)| (format!("M_{{{i},{j}}}"), pairs))
                .collect(),
        ),
    };

    let groups = raw_groups
        .into_iter()
        .map(|(label, pairs)| {
            let mut sum = Rational::zero();
            let mut inverted_sum = Rational::zero();
            let mut status = GroupStatus::LemmaApplies;
            let pairs = pairs
                .into_iter()
                .map(|(a, b)| {
                    let (i, j) = (relabel[a - 1], relabel[b - 1]);
                    let gap = p.prob(i) - p.prob(j);
                    if q.prob(i) > q.prob(j) {
                        status = GroupStatus::HypothesisSlack;
                    }
                    if p.prob(i) > p.prob(j) && q.prob(i) < q.prob(j) {
                        inverted_sum += &gap;
                    }
                    sum += gap;
                    (i + 1, j + 1)
                })
                .collect();
            GroupCertificate { label, pairs, sum, inverted_sum, status }
        })
        .collect::<Vec<_>>();

    let total = groups.iter().map(|g| &g.sum).sum();
    let worst_case_ordering = relabel.windows(2).all(|w| q.prob(w[0]) < q.prob(w[1]));
    let bound = Rational::from_integer(BigInt::from(2 * (n as i64 - 1))) * &epsilon;
    let lemma_bound_each = Rational::from_integer(BigInt::from(lemma_factor)) * &epsilon;

    Ok(BoundCertificate {
        n,
        p: p.clone(),
        q: q.clone(),
        epsilon,
        relabel,
        parity: design.parity(),
        lemma_bound_each,
        groups,
        total,
        delta,
        bound,
        worst_case_ordering,
    })
}
