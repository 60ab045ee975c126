use std::io;
use std::path::PathBuf;

use ducci::DucciError;
use thiserror::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ducci(#[from] DucciError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Ducci(e) if e.is_resource() => EXIT_RESOURCE,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
