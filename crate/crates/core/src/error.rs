use thiserror::Error;

/// Errors raised by constructors, evaluators and file ingestion.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is outside the operation's contract.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A value does not belong to the required domain (e.g. not in `L_n([0,1])`).
    #[error("domain error: {0}")]
    Domain(String),

    /// A construction precondition failed (not strong, no equilibrium, ...).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Fuzzy set ingestion failed; carries every offending row.
    #[error("ingestion error: {}", .0.join("; "))]
    Ingestion(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
