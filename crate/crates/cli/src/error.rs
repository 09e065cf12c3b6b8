use thiserror::Error;

/// Every failure the driver reports, each tied to one exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Regime(String),

    #[error("solver did not converge ({0})")]
    NotConverged(String),

    #[error("suite `{suite}` failed {failures} of {trials} trials")]
    SuiteFailed { suite: String, failures: usize, trials: usize },

    #[error("{0}")]
    Core(fracvar::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 config or usage, 2 inadmissible regime, 3 non-convergence,
    /// 4 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(_) | CliError::Io(_) => 1,
            CliError::Regime(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::SuiteFailed { .. } => 4,
        }
    }
}

impl From<fracvar::Error> for CliError {
    fn from(e: fracvar::Error) -> Self {
        match e {
            fracvar::Error::Regime(msg) => CliError::Regime(msg),
            other => CliError::Core(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
