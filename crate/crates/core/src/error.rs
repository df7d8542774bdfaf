use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),

    /// A run issued more oracle queries than its budget allows.
    #[error("query budget of {limit} exhausted")]
    BudgetExhausted { limit: u64 },

    #[error("integer encoding overflow: {0}")]
    EncodingOverflow(String),

    #[error("malformed instance at {path}: {reason}")]
    MalformedInstance { path: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn malformed(path: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::MalformedInstance {
        path: path.into(),
        reason: reason.into(),
    }
}
