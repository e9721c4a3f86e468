use thiserror::Error;

/// Errors raised by basis construction, conversions and invariant evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}: need N >= 2")]
    InvalidDimension(usize),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("inconsistent basis: {0}")]
    InconsistentBasis(String),

    #[error("trace is {0}, expected 1")]
    Normalization(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("star product undefined for N = 2")]
    StarUndefined,

    #[error("angle undefined for a zero coherence vector")]
    UndefinedAngle,

    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical consistency check failed: {0}")]
    NumericalConsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
