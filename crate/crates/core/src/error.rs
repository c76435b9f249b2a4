use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = HoloError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum HoloError {
    #[error("invalid patch grid: {0}")]
    InvalidGrid(String),

    /// Counts or shapes that do not line up (patch counts, layer sizes, model/header mismatch).
    #[error("structural mismatch: {0}")]
    Structural(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("integrity error at byte {offset}: {message}")]
    Integrity { offset: usize, message: String },

    #[error("unsupported format version {found} (expected {expected})")]
    UnsupportedVersion { found: u16, expected: u16 },

    #[error("training failed: {0}")]
    Training(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

impl HoloError {
    pub(crate) fn integrity(offset: usize, message: impl Into<String>) -> Self {
        HoloError::Integrity {
            offset,
            message: message.into(),
        }
    }

    pub(crate) fn file(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HoloError::File {
            path: path.into(),
            source,
        }
    }
}
