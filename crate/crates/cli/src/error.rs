use thiserror::Error;

/// Runner errors, mapped onto the process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric abort: {0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn config(field: &str, detail: impl std::fmt::Display) -> Self {
        CliError::Config(format!("{field}: {detail}"))
    }

    /// A core error surfaced while integrating (not while validating).
    pub fn numeric(err: fracdyn::Error) -> Self {
        CliError::Numeric(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
