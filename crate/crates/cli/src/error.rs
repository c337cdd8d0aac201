use symapprox::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    /// 1 validation, 2 I/O, 3 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                Error::Io { .. }
                | Error::SizeMismatch { .. }
                | Error::Parse { .. }
                | Error::VersionMismatch { .. }
                | Error::ConfigMismatch(_)
                | Error::StoreRead { .. } => 2,
                Error::InconsistentResults { .. } | Error::ConvergenceFailure { .. } => 3,
                _ => 1,
            },
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
