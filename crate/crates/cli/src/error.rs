use thiserror::Error;

use crate::config::ConfigError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    /// A library error caused by a configured value rather than the numerics.
    #[error("invalid input: {0}")]
    Input(qalb_core::Error),
    #[error("numeric guard: {0}")]
    Guard(qalb_core::Error),
    #[error("numeric guard ({context}): {source}")]
    GuardAt {
        context: String,
        source: qalb_core::Error,
    },
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl From<qalb_core::Error> for CliError {
    fn from(e: qalb_core::Error) -> Self {
        use qalb_core::Error as E;
        match e {
            E::InvalidInput(_) | E::DimMismatch(..) | E::NotPowerOfTwo(_) | E::OutOfRange(_) => {
                CliError::Input(e)
            }
            _ => CliError::Guard(e),
        }
    }
}

impl CliError {
    /// Attaches `context` to guard violations; other errors pass through.
    pub fn context(self, context: impl Into<String>) -> Self {
        match self {
            CliError::Guard(source) => CliError::GuardAt {
                context: context.into(),
                source,
            },
            e => e,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Input(_) => EXIT_CONFIG,
            CliError::Guard(_) | CliError::GuardAt { .. } => EXIT_GUARD,
            CliError::Io(_) => EXIT_IO,
        }
    }
}
