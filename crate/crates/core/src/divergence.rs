//! Kendall tau distance, the probability-weighted Kendall tau signed
//! divergence, and paths of adjacent transpositions between guessing
//! functions.
//!
//! An adjacent transposition acts on rank *slots*: step `j` exchanges the
//! symbols guessed at slots `j` and `j + 1`, which is left composition
//! `tau_j ∘ G`. Proof-style bookkeeping instead follows the original
//! elements: for a step applied to `G`, the symbol at slot `j` moves one
//! guess later (`moved_later`, written `x`) and the symbol at slot `j + 1`
//! moves one guess earlier (`moved_earlier`, written `y`). The divergence
//! of a single step is then `p_x - p_y`. [`TranspositionPath::steps_with_elements`]
//! exposes both views.

use num_traits::Zero;
use serde::Serialize;

use crate::distributions::Distribution;
use crate::error::{check_dims, Result};
use crate::guesswork::GuessingFunction;
use crate::rational::Rational;

/// Number of pairs ordered one way by `s1` and the other way by `s2`.
/// Counted with a merge sort in `O(n log n)`.
pub fn kendall_tau(s1: &GuessingFunction, s2: &GuessingFunction) -> Result<u64> {
    check_dims(s1.len(), s2.len())?;
    // s2's ranks listed in s1's guessing order; inversions are discordant pairs.
    let mut seq: Vec<usize> = s1.order().into_iter().map(|sym| s2.rank(sym)).collect();
    let mut buf = vec![0; seq.len()];
    Ok(count_inversions(&mut seq, &mut buf))
}

fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = {
        let (left, right) = v.split_at_mut(mid);
        count_inversions(left, &mut buf[..mid]) + count_inversions(right, &mut buf[mid..])
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf[k] = v[i];
            i += 1;
        } else {
            buf[k] = v[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    count
}

/// `K_p(s1, s2)`: sum of `p_i - p_j` over pairs with `s1(i) < s1(j)` and
/// `s2(i) > s2(j)`. Signed and asymmetric; equals the expected cost of
/// `s2` over `s1` under `p`.
pub fn weighted_kendall(
    p: &Distribution,
    s1: &GuessingFunction,
    s2: &GuessingFunction,
) -> Result<Rational> {
    check_dims(s1.len(), s2.len())?;
    check_dims(p.len(), s1.len())?;
    let n = p.len();
    let mut total = Rational::zero();
    for i in 0..n {
        for j in 0..n {
            if s1.rank(i) < s1.rank(j) && s2.rank(i) > s2.rank(j) {
                total += p.prob(i) - p.prob(j);
            }
        }
    }
    Ok(total)
}

/// `result(i) = outer(inner(i))`.
pub fn compose(outer: &GuessingFunction, inner: &GuessingFunction) -> Result<GuessingFunction> {
    check_dims(outer.len(), inner.len())?;
    let ranks = (0..inner.len()).map(|i| outer.rank(inner.rank(i) - 1)).collect();
    GuessingFunction::new(ranks)
}

/// One adjacent transposition with the two original elements it moves
/// (0-based symbols).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub slot: usize,
    pub moved_later: usize,
    pub moved_earlier: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranspositionPath {
    source: GuessingFunction,
    target: GuessingFunction,
    steps: Vec<usize>,
}

impl TranspositionPath {
    pub fn source(&self) -> &GuessingFunction {
        &self.source
    }

    pub fn target(&self) -> &GuessingFunction {
        &self.target
    }

    /// 1-based slot indices, applied in order.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every intermediate function, starting with the source and ending
    /// with the target.
    pub fn states(&self) -> Vec<GuessingFunction> {
        let mut current = self.source.clone();
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(current.clone());
        for &slot in &self.steps {
            current.swap_slots(slot);
            out.push(current.clone());
        }
        out
    }

    pub fn steps_with_elements(&self) -> Vec<Step> {
        let mut order = self.source.order();
        self.steps
            .iter()
            .map(|&slot| {
                let step = Step {
                    slot,
                    moved_later: order[slot - 1],
                    moved_earlier: order[slot],
                };
                order.swap(slot - 1, slot);
                step
            })
            .collect()
    }

    /// JSON array of slot indices.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.steps).expect("slots serialize")
    }
}

/// Shortest path of adjacent transpositions from `s1` to `s2`, produced by
/// bubble-sorting `s1`'s guessing order into `s2`'s. Its length is
/// `kendall_tau(s1, s2)`.
pub fn minimal_path(s1: &GuessingFunction, s2: &GuessingFunction) -> Result<TranspositionPath> {
    check_dims(s1.len(), s2.len())?;
    let mut order = s1.order();
    let n = order.len();
    let mut steps = Vec::new();
    for pass in 0..n {
        let mut swapped = false;
        for slot in 0..n.saturating_sub(1 + pass) {
            if s2.rank(order[slot]) > s2.rank(order[slot + 1]) {
                order.swap(slot, slot + 1);
                steps.push(slot + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    Ok(TranspositionPath { source: s1.clone(), target: s2.clone(), steps })
}
