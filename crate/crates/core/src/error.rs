use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Malformed {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("duplicate alias id `{0}`")]
    DuplicateId(String),

    #[error("alias universes differ: {0}")]
    UniverseMismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("label lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("no labels to compare")]
    EmptyInput,

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the caller's data or files rather than by a
    /// bug in this crate.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Invariant(_))
    }
}
