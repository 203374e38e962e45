use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible symbol bases")]
    BasisMismatch,
    #[error("invalid symbol basis: {0}")]
    InvalidBasis(String),
    #[error("algebra context mismatch: {0}")]
    ContextMismatch(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("no closed form for this cocycle shape ({0}); fall back to the nullspace oracle")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
