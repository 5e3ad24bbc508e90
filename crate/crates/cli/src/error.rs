use pinchperf_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    BadInput(String),
    #[error("tolerance violation: {0}")]
    Tolerance(String),
    #[error("numerical convergence failure: {0}")]
    Convergence(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadInput(_) | CliError::Io(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }

    /// Wraps a core error with the sweep row or grid point it came from.
    pub fn from_core(err: CoreError, context: &str) -> Self {
        match err {
            CoreError::Convergence { .. } => CliError::Convergence(format!("{context}: {err}")),
            _ => CliError::BadInput(format!("{context}: {err}")),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::from_core(err, "computation failed")
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::BadInput(format!("csv: {err}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::BadInput(format!("json: {err}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
