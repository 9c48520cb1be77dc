use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("vector is zero")]
    ZeroVector,
    #[error("non-finite entry at position {0}")]
    NonFinite(usize),
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {found} exceeds the supported maximum {max}")]
    DimensionTooLarge { max: usize, found: usize },
    #[error("invalid exponent {0}: {1}")]
    InvalidExponent(String, &'static str),
    #[error("invalid tolerance {name} = {value}: must lie in (0, 1)")]
    InvalidTolerance { name: &'static str, value: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
