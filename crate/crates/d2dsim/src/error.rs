//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A malformed line in a trace, config or log file.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// Structurally well-formed input that violates an invariant.
    #[error("validation: {0}")]
    Validation(String),

    /// Bad configuration value or unknown key/flag combination.
    #[error("config: {0}")]
    Config(String),

    /// The exact optimizer only handles tiny instances.
    #[error("instance has {vars} assignment variables, exact optimizer limit is {limit}; use a heuristic strategy")]
    InstanceTooLarge { vars: usize, limit: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn parse(path: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            path: path.to_string(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
