use thiserror::Error;

/// Errors surfaced by library operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("budget exceeded: {what} needs {required}, limit {limit}")]
    Budget {
        what: String,
        required: String,
        limit: String,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, required: impl ToString, limit: impl ToString) -> Self {
        Error::Budget {
            what: what.into(),
            required: required.to_string(),
            limit: limit.to_string(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
