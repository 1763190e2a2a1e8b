use std::path::PathBuf;

/// Failures of the scenario runner. Tolerance failures are not errors; they
/// are reported through [`crate::Outcome::pass`].
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] conepdo::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("writing {}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    /// Process exit status: 2 for validation failures, 4 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Csv { .. } | CliError::Core(conepdo::Error::Io(_)) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
