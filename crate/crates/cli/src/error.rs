//! Failures of a run and their exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed configuration, unknown names, bad parameters or violated
    /// preconditions of a scan.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }

    /// Prefixes the message with a grid index.
    pub fn at_point(self, i: usize) -> Self {
        match self {
            CliError::Config(m) => CliError::Config(format!("grid point {}: {}", i, m)),
            other => other,
        }
    }
}

pub fn config<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}
