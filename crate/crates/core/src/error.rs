use thiserror::Error;

/// Failures of exact arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("series precision exhausted")]
    Precision,
    #[error("cannot add values carrying different powers of pi")]
    MixedPi,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RmtError {
    #[error("moment diverges: {0}")]
    Divergent(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("odd dimension n = {0} is not supported for beta = 1")]
    OddDimension(i64),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("parameters not realizable by a matrix model: {0}")]
    Unrealizable(String),
    #[error(transparent)]
    Math(#[from] MathError),
}

impl RmtError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        RmtError::InvalidParameters(msg.into())
    }
}

pub type Result<T, E = RmtError> = std::result::Result<T, E>;
