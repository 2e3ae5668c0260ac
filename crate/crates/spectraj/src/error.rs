//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by dataset ingestion, configuration, and numerics.
#[derive(Debug, Error)]
pub enum Error {
    /// A malformed row in an annotation file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Structurally valid input that violates a data invariant.
    #[error("data error: {0}")]
    Data(String),

    /// Invalid configuration or usage.
    #[error("configuration error: {0}")]
    Config(String),

    /// Mismatched tensor or sequence shapes.
    #[error("shape error: {0}")]
    Shape(String),

    /// Non-finite values or numerical failure during computation.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI contract: 2 = usage/config, 3 = numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numeric(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
