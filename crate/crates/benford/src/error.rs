use thiserror::Error;

/// Errors shared by every module in the crate.
#[derive(Debug, Error)]
pub enum BenfordError {
    /// Input violated a precondition (non-finite value, out-of-range digit, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured budget (big-integer size, sequence length) was exceeded.
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    /// A dataset was unusable (empty effective sample, too many bad rows).
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, BenfordError>;

pub(crate) fn domain(msg: impl Into<String>) -> BenfordError {
    BenfordError::Domain(msg.into())
}
