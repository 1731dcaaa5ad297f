//! File formats, the subprocess oracle bridge and the `hyperchrom` command line.

use std::ffi::OsString;

pub mod corpus;
pub mod format;
pub mod oracle;

mod cli;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hyperchrom_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Usage(String),
    #[error("oracle: {0}")]
    Oracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit codes.
pub mod exit {
    /// Decided, verified, or all corpus entries matched.
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const REJECTED: i32 = 3;
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    cli::run(args)
}
