use thiserror::Error;

/// Failure modes shared by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    /// An unbounded least-number search ran past its budget.
    #[error("cap exceeded: {what} (cap {cap})")]
    CapExceeded { what: String, cap: usize },
    /// Path extraction found no child interval containing the probe interval.
    #[error("no candidate child at path index {index}")]
    NoCandidateChild { index: usize },
    #[error("no lift found")]
    NoLiftFound,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn cap(what: impl Into<String>, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            cap,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
