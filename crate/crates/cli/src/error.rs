use serde::{Deserialize, Serialize};

/// Anything that makes a command fail after its arguments were accepted.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed problem file: {0}")]
    Json(serde_json::Error),

    #[error(transparent)]
    Domain(#[from] jlfiltration_core::Error),

    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Json(_) => "malformed_input",
            CliError::Domain(e) => e.kind(),
            CliError::Verification(_) => "verification_failed",
        }
    }

    pub fn record(&self) -> ErrorRecord {
        ErrorRecord { error: ErrorBody { kind: self.kind().into(), message: self.to_string() } }
    }
}

/// The structured error document printed on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}
