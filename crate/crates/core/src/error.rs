use thiserror::Error;

/// Errors raised by map construction, the matrix kernel and the certificate builders.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its admissible range; `field` names the culprit.
    #[error("invalid parameter `{field}`: {reason}")]
    Parameter { field: String, reason: String },

    /// Matrix shapes do not conform.
    #[error("size mismatch: {0}")]
    Size(String),

    /// An input violates an operation contract (e.g. a non-Hermitian matrix
    /// passed to the Hermitian eigensolver).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A certificate construction was requested outside the regime where it
    /// is known to exist.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A quantity that must vanish by construction did not.
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}

impl Error {
    pub(crate) fn param(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
