use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Failure classes the command line distinguishes by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unknown protocol or an invalid parameter (exit 2).
    Invalid(String),
    /// An output file could not be written (exit 3).
    Output { path: PathBuf, source: std::io::Error },
    /// A threshold target no resource size reaches (exit 4).
    Unreachable(String),
    /// The simulation itself failed (exit 1).
    Simulation(String),
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn output(path: &Path, source: std::io::Error) -> Self {
        CliError::Output { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Simulation(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Output { .. } => 3,
            CliError::Unreachable(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => f.write_str(msg),
            CliError::Output { path, source } => write!(f, "cannot write {}: {source}", path.display()),
            CliError::Unreachable(msg) => f.write_str(msg),
            CliError::Simulation(msg) => write!(f, "simulation failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<loqc::Error> for CliError {
    fn from(e: loqc::Error) -> Self {
        match e {
            loqc::Error::InvalidArgument(msg) => CliError::Invalid(msg),
            loqc::Error::Precondition(_) | loqc::Error::DimensionMismatch { .. } => CliError::Invalid(e.to_string()),
            loqc::Error::Unreachable { .. } => CliError::Unreachable(e.to_string()),
            loqc::Error::CorrectionFailed { .. } => CliError::Simulation(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
