use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical failure: {0}")]
    Numerical(collar_core::Error),

    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Verdict(String),

    #[error("interrupted")]
    Interrupted,
}

impl CliError {
    /// 0 pass, 1 verdict failure, 2 configuration error, 3 numerical failure,
    /// 130 interrupted.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verdict(_) => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Interrupted => 130,
        }
    }
}

/// Bad inputs reported by the library count as configuration errors.
impl From<collar_core::Error> for CliError {
    fn from(e: collar_core::Error) -> Self {
        match e {
            collar_core::Error::Domain { .. } | collar_core::Error::Invalid(_) => CliError::Config(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
