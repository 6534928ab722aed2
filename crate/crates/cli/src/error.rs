use thiserror::Error;

/// Command failure, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or configuration: exit 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or invalid data: exit 2.
    #[error(transparent)]
    Data(#[from] kex_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Data(kex_core::Error::Io { path: path.to_path_buf(), source: e })
}
