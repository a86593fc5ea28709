use std::io;

use thiserror::Error;

/// Errors produced anywhere in the compressive-sensing pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index} out of range for length {len}")]
    Index { index: usize, len: usize },

    #[error("coefficient vector violates conjugate symmetry (max deviation {deviation:e})")]
    Symmetry { deviation: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("format error: {0}")]
    Format(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn dim(expected: usize, actual: usize) -> Self {
        Error::Dimension { expected, actual }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Parse { .. } => 3,
            Error::Parameter(_) => 4,
            Error::Format(_) => 5,
            Error::Integrity(_) => 6,
            Error::Dimension { .. } | Error::Index { .. } => 7,
            Error::Symmetry { .. } | Error::UndefinedMetric(_) => 8,
            Error::Resource(_) => 9,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
