//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction and verification routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A dense matrix dimension exceeded the supported maximum.
    #[error("dense dimension {dim} exceeds the supported maximum {max}")]
    SizeLimit { dim: usize, max: usize },

    /// An argument violated a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input data violated a mathematical hypothesis of the construction.
    #[error("inconsistent structure: {0}")]
    Inconsistent(String),

    /// A run configuration failed validation.
    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
