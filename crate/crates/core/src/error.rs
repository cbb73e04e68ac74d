//! Error type shared by the crate.

use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A negative-eigenvalue atom sits on an empty leaf (`|α| ≥ 1`).
    #[error("empty leaf: |alpha| = {modulus} >= 1 while lambda < 0")]
    EmptyLeaf {
        /// Modulus of the offending transversal point.
        modulus: f64,
    },

    /// An atom's harmonic function is not normalized to `H(0, 0) = 1`.
    #[error("harmonic spec is not normalized: H(0,0) = {value}")]
    NotNormalized {
        /// The value found at the normalization point.
        value: f64,
    },

    /// `H(0, 0)` vanishes (or is negative), so no normalization exists.
    #[error("degenerate normalization: H(0,0) = {0}")]
    DegenerateNormalization(f64),

    /// A harmonic spec violates its structural or positivity constraints.
    #[error("invalid harmonic spec: {0}")]
    InvalidSpec(String),

    /// The current does not satisfy the preconditions of a closed form or verifier.
    #[error("unsupported current: {0}")]
    Unsupported(String),

    /// Adaptive quadrature hit its depth limit before meeting the tolerances.
    #[error("quadrature did not converge: best estimate {estimate:e} with error {error:e}")]
    QuadratureFailure {
        /// Best available estimate of the integral.
        estimate: f64,
        /// Its error estimate.
        error: f64,
    },
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
