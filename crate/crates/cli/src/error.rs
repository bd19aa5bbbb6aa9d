use std::io;
use std::path::PathBuf;

use symprune::{ConfigError, CsymError, ParseError};
use thiserror::Error;

use crate::boxfile::BoxFileError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{err}")]
    Parse { path: PathBuf, err: ParseError },
    #[error("{0}")]
    BoxFile(#[from] BoxFileError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Csym(CsymError),
    #[error("box budget exhausted; output is partial")]
    BudgetExceeded,
    #[error("symmetry check failed at constraint {constraint}")]
    SymmetryFailed { constraint: usize },
    #[error("box sets differ beyond tolerance {tol}")]
    NotEquivalent { tol: f64 },
    #[error("cannot serialize run record: {0}")]
    Record(#[from] serde_json::Error),
}

impl From<CsymError> for CliError {
    fn from(e: CsymError) -> Self {
        match e {
            CsymError::Config(c) => CliError::Config(c),
            CsymError::OutOfRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Csym(other),
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 bad input, 2 domain is not a cube, 3 budget, 4 symmetry check,
    /// 5 box sets differ.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Csym(CsymError::NotACube { .. }) => 2,
            CliError::BudgetExceeded => 3,
            CliError::SymmetryFailed { .. } => 4,
            CliError::NotEquivalent { .. } => 5,
            _ => 1,
        }
    }
}
