use std::path::PathBuf;

use thiserror::Error;

/// Failures that stop a command before any relation is judged; all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] entropic_core::Error),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("malformed JSON input: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;
