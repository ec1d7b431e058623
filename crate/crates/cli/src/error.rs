use std::path::Path;

use srbb_qsp::QspError;
use srbb_qsp::variational::TwoStageFailure;

/// Failure classes, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("error {error:e} above threshold {threshold:e}")]
    Convergence { error: f64, threshold: f64 },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Convergence { .. } => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<QspError> for CliError {
    fn from(e: QspError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<TwoStageFailure> for CliError {
    fn from(e: TwoStageFailure) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
