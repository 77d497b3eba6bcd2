use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{path}: unsupported cache version (header {header:?}); remove the file to recompute")]
    CacheVersion { path: PathBuf, header: String },

    #[error("{path}: {reason}")]
    CacheInvalid { path: PathBuf, reason: String },

    #[error(transparent)]
    Core(#[from] xizero::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
