use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("guard exceeded: {0}")]
    Guard(String),

    #[error("mode violation: {0}")]
    ModeViolation(String),

    #[error("state error: {0}")]
    State(String),

    /// A gadget invariant that the construction guarantees did not hold.
    #[error("construction check failed: {0}")]
    Construction(String),

    #[error("promise violated: {0}")]
    Promise(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }

    pub(crate) fn state(message: impl Into<String>) -> Self {
        Error::State(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
