use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] xyquench::Error),

    #[error("parameter error: {0}")]
    Param(String),

    #[error("config file {path}: {msg}")]
    Config { path: PathBuf, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),
}

pub const EXIT_PARAMETER: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_VALIDATION: u8 = 4;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use xyquench::Error as E;
        match self {
            CliError::Param(_) | CliError::Config { .. } => EXIT_PARAMETER,
            CliError::Core(e) => match e.root() {
                E::InvalidParameter(_) | E::InsufficientResolution { .. } | E::NonpositiveScale(_) => {
                    EXIT_PARAMETER
                }
                _ => EXIT_NUMERICAL,
            },
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Io { .. } => 1,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
