use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] salpeter::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),

    /// Some sweep points failed; the table was still written.
    #[error("{failed} of {total} sweep points failed")]
    PartialSweep { failed: usize, total: usize, code: i32 },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::Io(_) => 1,
            CliError::PartialSweep { code, .. } => *code,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

pub fn core_exit_code(e: &salpeter::Error) -> i32 {
    use salpeter::Error as E;
    match e {
        E::NoBoundState { .. } => 2,
        E::InvalidParameter { .. } | E::ThresholdViolation { .. } => 3,
        E::InvalidIntegrand { .. } | E::ConvergenceFailure { .. } | E::MinimizationFailure { .. } => 4,
    }
}
