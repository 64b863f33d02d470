//! CLI-level error type and its mapping onto process exit codes.

use std::path::PathBuf;

/// Everything that can go wrong while driving experiments from the CLI.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Error bubbled up from the simulation library.
    #[error(transparent)]
    Core(#[from] clustersim_core::Error),
    /// Configuration document problem (parse error, unknown key,
    /// out-of-range value) detected at the CLI layer.
    #[error("configuration error: {0}")]
    Config(String),
    /// Filesystem failure, tagged with the path involved.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// Exit code contract: 2 for configuration/usage errors, 1 for run
    /// and I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_usage() => 2,
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Shorthand used across the CLI modules.
pub type CliResult<T> = std::result::Result<T, CliError>;
