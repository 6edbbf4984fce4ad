use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tagcluster_core::Error),
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] std::io::Error),
    #[error("{0}: {1}")]
    Csv(PathBuf, #[source] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    /// 2 for contract violations, 1 for everything the user can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_contract_violation() => 2,
            _ => 1,
        }
    }
}
