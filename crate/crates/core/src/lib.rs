//! Exact, non-asymptotic guesswork under distribution mismatch.
//!
//! A guessing function is a permutation of the alphabet; using one that is
//! optimal for `q` while the symbol is drawn from `p` costs
//! [`mismatch_cost`] extra guesses on average. That cost equals a
//! probability-weighted Kendall tau divergence between optimal guessing
//! functions ([`weighted_kendall`]) and is at most `2(n - 1)` times the
//! total variation distance ([`bound_certificate`] builds the
//! tournament-design argument for a concrete pair).
//!
//! All probabilities are exact rationals.

pub mod designs;
pub mod distributions;
pub mod divergence;
pub mod error;
pub mod guesswork;
pub mod oracle;
pub mod rational;
pub mod scan;

pub use designs::{
    bound_certificate, bridge_pair, even_design, odd_design, verify_design, BoundCertificate,
    PairSet, Parity, TournamentDesign, VerificationReport,
};
pub use distributions::{parse_distribution, total_variation, Distribution};
pub use divergence::{compose, kendall_tau, minimal_path, weighted_kendall, TranspositionPath};
pub use error::{Error, Result};
pub use guesswork::{
    canonical_optimal, expected_cost, expected_guesswork, mismatch_cost, optimal_count,
    optimal_set, GuessingFunction, OptimalSet, DEFAULT_ENUMERATION_CAP,
};
pub use rational::Rational;
