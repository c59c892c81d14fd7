use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("I/O error: {0}")]
    Stream(#[from] io::Error),

    #[error("malformed record at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("unknown tag {tag} at line {line}")]
    UnknownTag { tag: String, line: usize },

    #[error("invalid sample at line {line}: {reason}")]
    InvalidSample { line: usize, reason: String },

    #[error("invalid split request: {0}")]
    InvalidSplit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed XML at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("invalid feature configuration: {0}")]
    Features(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("feature dimension mismatch: model expects {expected}, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported model format version {found} (this build reads version {supported})")]
    ModelVersion { found: u64, supported: u64 },

    #[error("model file is truncated: {0}")]
    ModelTruncated(String),

    #[error("model file is corrupt: {0}")]
    ModelCorrupt(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io {
            path: path.as_ref().to_path_buf(),
            source,
        }
    }
}
