use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{context}: {source}")]
    Solver {
        context: String,
        source: fkin_core::Error,
    },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Check(String),
}

#[derive(Serialize)]
struct Record<'a> {
    error: &'a str,
    message: String,
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn solver(context: impl Into<String>, source: fkin_core::Error) -> Self {
        CliError::Solver {
            context: context.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "ConfigError",
            CliError::Solver { .. } => "SolverError",
            CliError::Io(_) => "IoError",
            CliError::Check(_) => "CheckFailed",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Check(_) => 1,
            CliError::Config(_) => 2,
            CliError::Solver { .. } => 3,
            CliError::Io(_) => 4,
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        let r = Record {
            error: self.kind(),
            message: self.to_string(),
        };
        serde_json::to_string(&r).unwrap_or_else(|_| format!("{{\"error\":\"{}\"}}", self.kind()))
    }
}

/// Input problems rejected by the library are configuration errors.
pub fn invalid(e: fkin_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

pub type CliResult<T> = Result<T, CliError>;
