use std::fmt;

/// Failure of a CLI invocation, split by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unusable configuration or input. Exit status 2.
    Config(String),
    /// The run started but a check failed or a computation gave up. Exit status 1.
    Failed(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Failed(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qwrca::Error> for CliError {
    fn from(e: qwrca::Error) -> Self {
        use qwrca::Error::*;
        match e {
            Quadrature { .. } | Unsatisfiable(_) | GridTooCoarse { .. } => {
                CliError::Failed(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failed(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
