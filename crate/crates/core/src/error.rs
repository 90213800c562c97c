use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("integrand returned non-finite value {value} at {at}")]
    InvalidIntegrand { at: f64, value: f64 },

    #[error("{context} did not converge (best estimate {best}, error estimate {error})")]
    ConvergenceFailure {
        context: &'static str,
        best: f64,
        error: f64,
    },

    #[error("energy {energy} is not below the threshold m = {mass}")]
    ThresholdViolation { energy: f64, mass: f64 },

    #[error("no bound state: {reason}")]
    NoBoundState {
        reason: String,
        critical_coupling: Option<f64>,
    },

    #[error("minimization failed: {reason}")]
    MinimizationFailure { reason: String },
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn field(&self) -> Option<&str> {
        match self {
            Error::InvalidParameter { field, .. } => Some(field),
            _ => None,
        }
    }
}
