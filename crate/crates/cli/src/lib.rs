//! Library half of the `quditsep` binary: file formats, JSON output and
//! the subcommand implementations.

use std::io;
use std::path::{Path, PathBuf};

pub mod certificate;
pub mod commands;
pub mod json;
pub mod matrix_file;

pub use matrix_file::MatrixFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid matrix file: {0}")]
    Format(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Core(#[from] quditsep::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(quditsep::Error::Degenerate(_)) => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        }
    }
}

/// Text for standard output together with the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}
