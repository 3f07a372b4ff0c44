use std::path::PathBuf;

use thiserror::Error;
use typereuse_core::typemodel::TypeError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A corpus line that is not a valid class or method record.
    #[error("line {line}: {message}")]
    Schema { line: usize, message: String },
    /// A corpus line whose types do not resolve or validate.
    #[error("line {line}: {source}")]
    CorpusType {
        line: usize,
        #[source]
        source: TypeError,
    },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    /// A well-formed JSON document with the wrong shape.
    #[error("{0}")]
    Format(String),
}

impl Error {
    pub(crate) fn format(message: impl Into<String>) -> Error {
        Error::Format(message.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
