use std::fmt;
use std::path::{Path, PathBuf};

/// Failure of a CLI run, carrying the process exit status it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable inputs, invalid configuration. Exit 1.
    Usage(String),
    /// The computation failed (non-finite loss, failed decomposition,
    /// graph generation exhausted). Exit 2.
    Numerical(String),
    /// Writing an artifact failed. Exit 1.
    Io { path: PathBuf, message: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(m) => write!(f, "{m}"),
            CliError::Io { path, message } => write!(f, "{}: {message}", path.display()),
        }
    }
}

impl std::error::Error for CliError {}

impl From<landscape_core::Error> for CliError {
    fn from(e: landscape_core::Error) -> Self {
        match e {
            landscape_core::Error::Usage(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
