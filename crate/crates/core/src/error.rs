use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Two series of different truncation order were combined.
    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("index {index} out of range for series of order {order}")]
    OutOfRange { index: usize, order: usize },

    /// The operation is undefined for this input (non-invertible constant
    /// term, nonzero constant under exp, and so on).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown identity: {0}")]
    UnknownIdentity(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors that indicate a caller broke an operation contract,
    /// as opposed to bad user input.
    pub fn is_contract_violation(&self) -> bool {
        matches!(
            self,
            Error::OrderMismatch { .. } | Error::OutOfRange { .. } | Error::Domain(_)
        )
    }
}
