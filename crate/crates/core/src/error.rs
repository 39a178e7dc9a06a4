use thiserror::Error;

/// Errors raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("series is not invertible: {0}")]
    NotInvertible(String),

    #[error("coefficient at exponent {exponent} requested but series is only known below {order}")]
    BeyondTruncation { exponent: i64, order: i64 },

    #[error("truncation too small: {0}")]
    InsufficientTruncation(String),

    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(u32, u32),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
