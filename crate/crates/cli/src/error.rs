use std::process::ExitCode;

use ipchoice_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("recheck mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    pub fn schema(e: Error) -> Self {
        CliError::Schema(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Schema(_) => 2,
            CliError::Engine(Error::Input(_) | Error::Dimension { .. } | Error::Domain(_)) => 2,
            CliError::Engine(Error::Capacity { .. }) => 3,
            CliError::Engine(Error::Internal(_)) | CliError::Mismatch(_) => 4,
        })
    }
}
