use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter was outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    Param { name: &'static str, reason: String },

    /// Input data failed a structural validation check.
    #[error("validation failed: {0}")]
    Validation(String),

    /// Two inputs that must describe the same state disagree.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    /// The integrator produced a non-finite value.
    #[error("numerical divergence at step {step} (t = {time})")]
    Divergence { step: usize, time: f64 },

    /// An optimizer ended on the boundary of its search interval.
    #[error("maximizer stuck at the search boundary lambda_max = {lambda_max}")]
    BoundarySolution { lambda_max: f64 },

    /// The requested quantity is undefined for the given inputs.
    #[error("undefined: {0}")]
    Undefined(String),

    /// The operation refuses inputs outside its intended scale.
    #[error("refused: {0}")]
    Refused(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Param {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
