use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, IoError>;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", .path.display())]
    Csv { path: PathBuf, message: String },

    #[error("{}: line {line} has {found} values, expected {expected}", .path.display())]
    RaggedRow {
        path: PathBuf,
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("{}: line {line}, column {column}: not a finite number: {token:?}", .path.display())]
    BadNumber {
        path: PathBuf,
        line: usize,
        column: usize,
        token: String,
    },

    #[error("{}: no matrix rows", .path.display())]
    Empty { path: PathBuf },

    #[error("{}: {source}", .path.display())]
    Matrix {
        path: PathBuf,
        #[source]
        source: palm_nmf_core::Error,
    },

    #[error("{}: {source}", .path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
