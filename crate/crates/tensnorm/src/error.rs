use tensnorm_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("invalid argument: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("solver did not converge: {0}")]
    NotConverged(String),
}

impl CliError {
    /// 2 input error, 3 numerical failure, 4 infeasible or inconsistent input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(..) | CliError::Format(_) | CliError::Usage(_) => 2,
            CliError::NotConverged(_) => 3,
            CliError::Core(e) => match e {
                CoreError::Numerical(_) => 3,
                CoreError::Infeasible { .. }
                | CoreError::NotHermitian { .. }
                | CoreError::NotPsd { .. }
                | CoreError::TraceNotOne { .. }
                | CoreError::InvalidDensity(_)
                | CoreError::NotUnitState { .. }
                | CoreError::NotSymmetric { .. }
                | CoreError::NotProductState { .. }
                | CoreError::ZeroTensor => 4,
                _ => 2,
            },
        }
    }
}
