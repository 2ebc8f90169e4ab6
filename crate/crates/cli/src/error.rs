use thiserror::Error;

/// Process exit codes.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: despeckle::Error,
    },

    #[error(transparent)]
    Core(#[from] despeckle::Error),

    #[error("config: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        let core = match self {
            CliError::Usage(_) | CliError::Config(_) => return EXIT_USAGE,
            CliError::File { source, .. } => source,
            CliError::Core(e) => e,
        };
        match core {
            despeckle::Error::Parameter(_) => EXIT_USAGE,
            despeckle::Error::UndefinedMetric(_) => EXIT_NUMERIC,
            _ => EXIT_DATA,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
