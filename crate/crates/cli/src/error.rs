use gwsql::closedform::ClosedFormError;
use gwsql::{ModelError, OracleError, SensitivityError};
use thiserror::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VALIDATION: i32 = 1;
    pub const VERIFICATION: i32 = 2;
    pub const NUMERICAL: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("invalid parameters: {0}")]
    Model(#[from] ModelError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Numerical(String),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("row {index}: {source}")]
    Row { index: usize, source: Box<CliError> },
    #[error("{failed} verification check(s) failed")]
    VerificationFailed { failed: usize },
}

impl From<SensitivityError> for CliError {
    fn from(e: SensitivityError) -> Self {
        match e {
            SensitivityError::Model(m) => Self::Model(m),
            SensitivityError::NotBracketed { .. } | SensitivityError::OutsideLinearRegime(_) => {
                Self::Numerical(e.to_string())
            }
            other => Self::Validation(other.to_string()),
        }
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        match e {
            ClosedFormError::Model(m) => Self::Model(m),
            other => Self::Numerical(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) | Self::Model(_) | Self::Io { .. } => exit::VALIDATION,
            Self::Numerical(_) => exit::NUMERICAL,
            Self::Oracle(e) if e.is_truncation() => exit::NUMERICAL,
            Self::Oracle(_) => exit::VALIDATION,
            Self::Row { source, .. } => source.exit_code(),
            Self::VerificationFailed { .. } => exit::VERIFICATION,
        }
    }
}
