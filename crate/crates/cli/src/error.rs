use std::path::PathBuf;

use serde_json::json;

/// Exit status 2 covers bad arguments and configuration, 3 covers failures
/// while computing or writing results.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    /// Invalid configuration or symbol input rejected by the library.
    #[error("{0}")]
    Input(clarklab::Error),
    #[error("{0}")]
    Numerical(clarklab::Error),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => 2,
            CliError::Numerical(_) | CliError::Io { .. } => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(e) | CliError::Numerical(e) => e.kind(),
            CliError::Io { .. } => "io",
        }
    }

    /// One-line JSON record for stderr.
    pub fn record(&self) -> String {
        json!({ "error": { "kind": self.kind(), "message": self.to_string(), "exit_code": self.exit_code() } })
            .to_string()
    }
}

impl From<clarklab::Error> for CliError {
    fn from(e: clarklab::Error) -> Self {
        CliError::Numerical(e)
    }
}
