use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Toolkit-wide error type.
///
/// `Input` covers precondition violations (bad thresholds, unknown labels,
/// mismatched dimensions), `Parse` covers malformed files and carries a
/// 1-based line number, and `Capacity` signals that an enumeration hit its
/// configured cap. The CLI maps capacity errors onto a distinct exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("capacity exceeded: reached {reached} concepts (cap {cap})")]
    Capacity { reached: usize, cap: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn input(message: impl Into<String>) -> Self {
        Error::Input(message.into())
    }

    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }

    /// True for errors that should abort with the capacity exit code.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
