//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide error. The two variants map onto the CLI exit codes:
/// configuration/validation problems exit with 1, data problems with 2.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid configuration or violated parameter invariant.
    #[error("config error: {0}")]
    Config(String),
    /// Malformed or unusable input data.
    #[error("data error: {0}")]
    Data(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
