use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's contract.
    #[error("usage error: {0}")]
    Usage(String),

    /// A text input could not be parsed.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// The analysis cannot proceed (inconsistent system, no annihilators, ...).
    #[error("analysis error: {0}")]
    Analysis(String),

    /// An operation would exceed the configured resource budget.
    #[error("resource error: {msg} (needs {required_bytes} bytes, cap {cap_bytes} bytes)")]
    Resource {
        msg: String,
        required_bytes: u64,
        cap_bytes: u64,
    },

    /// A generic enumeration/size limit was hit.
    #[error("resource error: {0}")]
    Limit(String),

    /// A designer-imposed policy (such as the keystream length limit) was violated.
    #[error("policy error: {0}")]
    Policy(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn analysis(msg: impl Into<String>) -> Self {
        Error::Analysis(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse { .. } | Error::Policy(_) | Error::Io(_) => 1,
            Error::Analysis(_) => 2,
            Error::Resource { .. } | Error::Limit(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
