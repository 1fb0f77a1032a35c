use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("series divisor does not have a nonzero constant leading term")]
    DivisorNotUnit,
    #[error("substitution left a denominator in x: {0}")]
    NonPolynomialResult(String),
    #[error("non-integer coefficient in {family}_{index}")]
    IntegralityViolation { family: String, index: usize },
    #[error("calibration failed for family {family}: {detail}")]
    CalibrationFailure { family: String, detail: String },
    #[error("imaginary residue {0} exceeds tolerance")]
    ImaginaryResidue(String),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("integrand is singular on the path: {0}")]
    SingularIntegrand(String),
    #[error("lattice sum needs more terms than the budget allows: {0}")]
    SlowConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
