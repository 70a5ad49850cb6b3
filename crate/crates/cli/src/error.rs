use thiserror::Error;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or parameters.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input, or an output that cannot be written.
    #[error("{0}")]
    Input(String),
    /// The command ran but its check did not hold.
    #[error("{0}")]
    CheckFailed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::CheckFailed(_) => EXIT_CHECK_FAILED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<rauzy_core::Error> for CliError {
    fn from(e: rauzy_core::Error) -> Self {
        use rauzy_core::Error as E;
        let msg = e.to_string();
        match e {
            E::Domain(_) | E::Length { .. } | E::EnumerationCap { .. } | E::AmbiguousStationary { .. } => {
                CliError::Usage(msg)
            }
            E::Parse { .. } | E::Io(_) | E::Json(_) => CliError::Input(msg),
            E::Internal(_) => CliError::Internal(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
