use thiserror::Error;

/// Everything a command can fail with, mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] thinrep::Error),
}

impl CliError {
    /// 0 success, 1 config, 2 infeasible, 3 overflow, 4 capacity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Core(e) => match e {
                thinrep::Error::Infeasible { .. } => 2,
                thinrep::Error::Overflow { .. } => 3,
                thinrep::Error::Capacity { .. } | thinrep::Error::UnstablePrime { .. } => 4,
                _ => 1,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
