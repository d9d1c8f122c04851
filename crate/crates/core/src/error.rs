use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("factor index {index} is invalid for a shape with {factors} factors")]
    BadFactorIndex { index: usize, factors: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("supplied columns are not orthonormal (max Gram deviation {deviation:e})")]
    NotOrthonormalInput { deviation: f64 },

    #[error("could not extend the orthonormal set to a full basis ({found} of {needed} columns)")]
    CompletionFailure { found: usize, needed: usize },

    #[error("not a density operator: {0}")]
    NotDensityOperator(String),

    #[error("parameter must be finite, got {0}")]
    NonFiniteParameter(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
