use thiserror::Error;

/// Errors raised by the region evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A distribution or channel failed validation.
    #[error("validation error: {0}")]
    Validation(String),
    /// The caller combined arguments in an unsupported way.
    #[error("usage error: {0}")]
    Usage(String),
    /// A structural precondition (e.g. physical degradedness) does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
