use thiserror::Error;

/// Errors raised by the evaluators and integrators.
///
/// Claim audits never return an error for a disagreement between two sides of
/// an identity; that outcome is recorded in a [`crate::report::ClaimReport`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuditError {
    #[error("pole at {0}")]
    Pole(String),
    #[error("argument outside the certified domain: {0}")]
    Domain(String),
    #[error("denominator 1 - 2^(1-s) too close to zero at {0}")]
    DegenerateDenominator(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("quadrature did not converge: value {value:e}, error estimate {error:e}")]
    NonConvergence { value: f64, error: f64 },
    #[error("integral appears to diverge (estimate {0:e} still growing)")]
    Divergence(f64),
    #[error("amplitude is not strictly decreasing near x = {0}")]
    AmplitudeNotDecreasing(f64),
    #[error("insufficient working precision: need at least {needed} digits, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("series truncation not certified within {0} terms")]
    Truncation(usize),
    #[error("result overflows the floating range")]
    Overflow,
    #[error("dimension {0} exceeds the supported maximum")]
    DimensionOverflow(usize),
    #[error("finite-difference step too large: {0}")]
    StepTooLarge(String),
}

pub type Result<T> = std::result::Result<T, AuditError>;
