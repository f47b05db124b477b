use std::io;
use std::path::PathBuf;

use cochange_core::eval::{EvalError, SweepError};
use cochange_core::miners::MiningError;
use cochange_core::prep::SplitError;
use cochange_core::rules::{RecommendError, RuleError};
use cochange_core::stats::CompareError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}:{line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
    #[error("repository not found: {}", .0.display())]
    RepoNotFound(PathBuf),
    #[error("not a git repository: {}", .0.display())]
    NotAGitRepository(PathBuf),
    #[error("git failed: {0}")]
    GitRead(String),
    #[error("{0}")]
    Usage(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Mining(#[from] MiningError),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Compare(#[from] CompareError),
    #[error(transparent)]
    Recommend(#[from] RecommendError),
    #[error(transparent)]
    Rules(#[from] RuleError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), line, message: message.into() }
    }

    /// 2 for broken internal invariants, 1 for everything the user can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Invariant(_) | Error::Rules(_) | Error::Sweep(SweepError::Rules(_)) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
