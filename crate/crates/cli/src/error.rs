use std::process::ExitCode;

use stokes_squeeze::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("cannot write {0}: {1}")]
    Output(String, std::io::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 failed check, 2 invalid input, 3 degenerate squeezing criterion.
    pub fn exit_code(&self) -> ExitCode {
        let code = match self {
            CliError::Core(Error::DegenerateAxis(_) | Error::NoValidPoint(_)) => 3,
            CliError::Core(Error::NonConverged { .. } | Error::TruncationError(_)) => 1,
            CliError::Core(_) => 2,
            CliError::Output(..) | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
        };
        ExitCode::from(code)
    }
}
