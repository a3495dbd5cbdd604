use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: a parameter or configuration field outside its domain.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    /// A precondition of an operation does not hold for otherwise valid inputs.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("degree mismatch: expected {expected}, got {actual}")]
    DegreeMismatch { expected: usize, actual: usize },

    /// Exponential weight `e^{exponent}` overflows double precision.
    #[error("exponential weight overflows at mode {mode} (exponent {exponent:.6e}); use a smaller sigma or degree")]
    Range { mode: usize, exponent: f64 },

    #[error("integration produced a non-finite state at step {step}")]
    IntegrationFailure { step: usize },

    #[error("SVD did not converge after {sweeps} sweeps (off-diagonal ratio {off_diagonal:.3e}, condition estimate {condition:.3e})")]
    SvdNonConvergence {
        sweeps: usize,
        off_diagonal: f64,
        condition: f64,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by floating-point breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Range { .. } | Error::IntegrationFailure { .. } | Error::SvdNonConvergence { .. }
        )
    }

    /// True for errors caused by invalid configuration or unmet preconditions.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Validation { .. } | Error::Precondition(_) | Error::DegreeMismatch { .. }
        )
    }
}
