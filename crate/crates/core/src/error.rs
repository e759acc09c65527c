use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootsNotConverged {
        best: Vec<Complex64>,
        residual: f64,
        iterations: usize,
    },

    #[error("remez exchange stagnated after {iterations} iterations (norm spread {spread:e})")]
    RemezStagnated {
        /// Best iterate, ascending monomial coefficients.
        best: Vec<f64>,
        spread: f64,
        iterations: usize,
    },

    #[error("calibration newton iteration failed after {iterations} iterations (residual {residual:e})")]
    CalibrationDiverged {
        /// Last endpoint vector.
        last: Vec<f64>,
        residual: f64,
        iterations: usize,
    },

    #[error("singular system: {0}")]
    Singular(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("protected coefficient of z^{degree} is not a Gaussian integer: {value}")]
    ProtectedCoefficient { degree: usize, value: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("interpolation failed: {0}")]
    Interpolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
