use std::path::PathBuf;

use kuo_core::{ErrorClass, KuoError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Solver(#[from] KuoError),
    #[error("validation: {0}")]
    Validation(String),
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 validation, 3 non-convergence, 4 bracket failure, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(e) => match e.class() {
                ErrorClass::Validation => 2,
                ErrorClass::NonConvergence => 3,
                ErrorClass::Bracket => 4,
            },
            CliError::Validation(_) => 2,
            CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
