use std::io;
use std::path::{Path, PathBuf};

/// Errors raised by ingestion, configuration, the pipeline and emission.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{context}: {source}")]
    Analysis {
        context: String,
        #[source]
        source: mfdma_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn analysis(context: impl Into<String>, source: mfdma_core::Error) -> Self {
        CliError::Analysis {
            context: context.into(),
            source,
        }
    }

    /// Process exit code: 2 validation, 3 degenerate data, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Parse { .. } => 2,
            CliError::Analysis { source, .. } if source.is_degenerate() => 3,
            CliError::Analysis { .. } => 2,
            CliError::Io { .. } => 4,
        }
    }
}

impl From<mfdma_core::Error> for CliError {
    fn from(e: mfdma_core::Error) -> Self {
        CliError::analysis("analysis", e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
