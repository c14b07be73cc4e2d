use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    #[error("invalid input for `{field}`: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    /// The operation would exceed a configured memory or cost budget.
    #[error("resource limit exceeded: {what} needs {needed} but the cap is {cap}")]
    Resource { what: &'static str, needed: u64, cap: u64 },

    /// A search finished without a result.
    #[error("not found: {0}")]
    NotFound(String),

    /// An emitted result failed its independent re-check.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput { field, reason: reason.into() }
    }
}
