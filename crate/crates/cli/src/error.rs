use thiserror::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration: exit code 2.
    #[error("{0}")]
    Validation(String),
    /// Nothing to report, e.g. no grid point inside the engine window: exit code 3.
    #[error("{0}")]
    Empty(String),
    /// Anything else: exit code 1.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Empty(_) => 3,
            CliError::Internal(_) => 1,
        }
    }

    pub(crate) fn field(name: &str, value: impl std::fmt::Display, expected: &str) -> Self {
        CliError::Validation(format!("invalid `{name}` = {value}: expected {expected}"))
    }
}

impl From<relengine::Error> for CliError {
    fn from(err: relengine::Error) -> Self {
        match err {
            relengine::Error::Domain { .. } => CliError::Validation(err.to_string()),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Internal(err.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
