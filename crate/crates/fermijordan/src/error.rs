use std::fmt;

use fermijordan_core::Error as CoreError;

/// Failure of a command, mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files; exit code 2.
    Usage(String),
    /// A proven identity failed; exit code 1.
    Integrity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Integrity(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "usage error: {msg}"),
            CliError::Integrity(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Integrity(_) | CoreError::Shape(_) => CliError::Integrity(e.to_string()),
            CoreError::Domain { .. } | CoreError::TooLarge(_) => CliError::Usage(e.to_string()),
        }
    }
}
