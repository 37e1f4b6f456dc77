//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration value (bad hyperparameter range, empty split, ...).
    #[error("config error: {0}")]
    Config(String),

    /// Structural mismatch between containers that must agree (lengths, shapes).
    #[error("shape error: {0}")]
    Shape(String),

    /// A numeric cell could not be parsed; location is 1-based.
    #[error("parse error at row {row}, column {col}: {msg}")]
    Parse { row: usize, col: usize, msg: String },

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Training produced a non-finite loss; diagnostics included.
    #[error("non-finite loss at epoch {epoch}, batch {batch}: {details}")]
    NonFinite {
        epoch: usize,
        batch: usize,
        details: String,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
