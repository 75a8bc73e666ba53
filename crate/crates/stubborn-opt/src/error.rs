use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by graph ingestion, validation, and the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (edge lists, set files).
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally invalid graph or node set.
    #[error("{0}")]
    InvalidData(String),

    /// An operation was called with arguments that violate its contract.
    #[error("{0}")]
    InvalidArgument(String),

    /// A solver failed to reach its required tolerance.
    #[error("{0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::InvalidData(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
