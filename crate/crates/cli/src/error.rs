use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line or configuration file (exit 1).
    #[error("{0}")]
    Config(String),
    /// Unreadable, malformed or unusable data (exit 2).
    #[error("{0}")]
    Data(String),
    /// The optimizer did not converge (exit 3).
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) => 2,
            CliError::NotConverged(_) => 3,
        }
    }
}

impl From<zip3::Error> for CliError {
    fn from(e: zip3::Error) -> Self {
        match e {
            zip3::Error::InvalidParameter(_) => CliError::Config(e.to_string()),
            zip3::Error::NotConverged | zip3::Error::TooManyFailures { .. } => {
                CliError::NotConverged(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Error for a file that could not be written.
pub fn write_error(path: &std::path::Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: cannot write: {e}", path.display()))
}
