use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the library. Every variant carries a stable code
/// (see [`Error::code`]) that the CLI reports on stderr.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("distribution is empty")]
    Empty,

    #[error("entry {index} is negative ({value})")]
    NegativeEntry { index: usize, value: String },

    #[error("entries sum to {sum}, not 1")]
    NotNormalized { sum: String },

    #[error("cannot parse {token:?}: {reason}")]
    Parse { token: String, reason: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("not a permutation of 1..={n}: {detail}")]
    NotAPermutation { n: usize, detail: String },

    #[error("{count} optimal guessing functions exceed the enumeration cap {cap}")]
    EnumerationTooLarge { count: BigUint, cap: u64 },

    #[error("n = {n} is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("n = {n} has the wrong parity for this construction")]
    Parity { n: usize },

    #[error("{0}")]
    Range(String),

    #[error("rounds {0} and {0} are the same round")]
    SameRound(usize),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::Empty => "EMPTY",
            Error::NegativeEntry { .. } => "NEGATIVE_ENTRY",
            Error::NotNormalized { .. } => "NOT_NORMALIZED",
            Error::Parse { .. } => "PARSE",
            Error::DimensionMismatch { .. } => "DIMENSION_MISMATCH",
            Error::NotAPermutation { .. } => "NOT_A_PERMUTATION",
            Error::EnumerationTooLarge { .. } => "ENUMERATION_TOO_LARGE",
            Error::TooLarge { .. } => "TOO_LARGE",
            Error::Parity { .. } => "PARITY",
            Error::Range(_) => "RANGE",
            Error::SameRound(_) => "SAME_ROUND",
        }
    }

    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
