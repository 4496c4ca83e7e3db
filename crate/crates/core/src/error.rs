use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Angle (or complex argument) not strictly inside the weight's sector.
    #[error("sector violation: |theta| = {theta} is not below the sector half-angle {alpha}")]
    SectorViolation { theta: f64, alpha: f64 },

    /// Two-precision agreement could not reach the target before the
    /// escalation ceiling.
    #[error(
        "precision budget exhausted: {achieved_digits} of {target_digits} digits certified \
         at {precision_bits} bits (best estimate {best_estimate})"
    )]
    PrecisionBudget {
        target_digits: u32,
        achieved_digits: u32,
        precision_bits: u32,
        best_estimate: String,
    },

    /// Cholesky pivot of a Hankel moment matrix was not positive at the
    /// working precision.
    #[error("non-positive pivot at index {index} of the Hankel moment matrix")]
    PivotLoss { index: usize },

    #[error("odd degree {0} has no upper bound in the Hermite family")]
    UnsupportedParity(usize),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid precision policy: {0}")]
    InvalidPolicy(String),

    /// Gaussian ratio numerator diverges.
    #[error("divergent integral: {0}")]
    Divergent(String),
}

impl Error {
    /// Failures that more working precision may cure.
    pub fn is_precision_limited(&self) -> bool {
        matches!(self, Error::PivotLoss { .. } | Error::PrecisionBudget { .. })
    }
}
