use std::path::PathBuf;

use fusegraph::io::DocumentError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: invalid document\n{error}", .path.display())]
    Invalid { path: PathBuf, error: DocumentError },
    /// Valid documents the chosen decider does not accept.
    #[error("{0}")]
    Rejected(String),
    /// Carries the decider's own message, which names the limit.
    #[error("{0}")]
    ResourceLimit(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ResourceLimit(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Invalid { .. } => "validation",
            CliError::Rejected(_) => "rejected",
            CliError::ResourceLimit(_) => "resource_limit",
        }
    }

    /// Resource limits get their own exit code; anything else is the input's fault.
    pub fn from_decider(e: impl std::fmt::Display, resource_limit: bool) -> Self {
        if resource_limit {
            CliError::ResourceLimit(e.to_string())
        } else {
            CliError::Rejected(e.to_string())
        }
    }
}
