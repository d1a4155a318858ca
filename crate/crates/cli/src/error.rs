use std::fmt;
use std::path::Path;

use wgp_core::format::FormatError;
use wgp_core::generators::GenError;
use wgp_core::oracle::OracleError;
use wgp_core::schedulers::SchedulerError;
use wgp_core::ScheduleError;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Malformed(String),
    Violation(String),
    Unknown(String),
    Scheduler(String),
    TooLarge(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Malformed(_) => 4,
            CliError::Violation(_) => 5,
            CliError::Unknown(_) => 6,
            CliError::Scheduler(_) => 7,
            CliError::TooLarge(_) => 8,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }

    pub fn malformed(path: &Path, err: FormatError) -> Self {
        CliError::Malformed(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::Malformed(m)
            | CliError::Violation(m)
            | CliError::Unknown(m)
            | CliError::Scheduler(m)
            | CliError::TooLarge(m) => m,
        };
        f.write_str(msg)
    }
}

impl From<SchedulerError> for CliError {
    fn from(err: SchedulerError) -> Self {
        match err {
            SchedulerError::ZeroSigma | SchedulerError::BadPriority(_) => {
                CliError::Usage(err.to_string())
            }
            SchedulerError::HorizonExceeded { .. } => CliError::Scheduler(err.to_string()),
        }
    }
}

impl From<ScheduleError> for CliError {
    fn from(err: ScheduleError) -> Self {
        CliError::Violation(err.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(err: OracleError) -> Self {
        match err {
            OracleError::TooLarge { .. } => CliError::TooLarge(err.to_string()),
            OracleError::Infeasible(e) => e.into(),
        }
    }
}

impl From<GenError> for CliError {
    fn from(err: GenError) -> Self {
        match err {
            GenError::Schedule(e) => CliError::Violation(format!("constructed schedule: {e}")),
            GenError::NotConnected(_) => CliError::Scheduler(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}
