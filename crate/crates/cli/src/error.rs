use std::path::Path;

use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: u8 = 0;
/// Unreadable input, malformed file, or bad command line.
pub const EXIT_INPUT: u8 = 1;
/// Inputs parsed but a measurement-theoretic check failed.
pub const EXIT_DOMAIN: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] qmeas_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn parse(path: &Path, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.display().to_string(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Usage(_) => EXIT_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}
