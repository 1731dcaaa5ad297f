use alloc::string::String;

/// Errors raised by the algorithmic layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
    #[error("invalid surjection: {0}")]
    InvalidSurjection(String),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("{what} exceeds budget of {limit}")]
    BudgetExceeded { what: &'static str, limit: u64 },
    #[error("unsupported input for this backend: {0}")]
    Unsupported(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
