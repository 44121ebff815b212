use thiserror::Error;

/// Errors produced by the solvers.
///
/// Numeric payloads are stored as `f64` regardless of the scalar type in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("time {t} lies outside the sampled range [{lo}, {hi}]")]
    OutOfRange { t: f64, lo: f64, hi: f64 },

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tolerance:.3e})")]
    NonHermitianInput { defect: f64, tolerance: f64 },

    #[error("no closed-form propagator for this configuration: {0}")]
    NoClosedForm(String),

    #[error("degenerate denominator alpha^2 + a'^2 = {value:.3e} in the literal Rabi form")]
    DegenerateDenominator { value: f64 },

    #[error("drive frequency must be non-zero")]
    ZeroDriveFrequency,

    #[error("(lambda, C) is not an eigenpair: |D(lambda) C| = {residual:.3e}")]
    NotAnEigenpair { residual: f64 },

    #[error("integrator did not converge: step {step:.3e} fell below the minimum with refinement change {delta:.3e}")]
    NoConvergence { step: f64, delta: f64 },

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),

    #[error("eigenvalue iteration failed to converge")]
    EigenNoConvergence,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
