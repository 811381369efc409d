//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point lies on or outside the domain of its chart.
    #[error("point outside chart domain: {0}")]
    OutsideChart(String),

    /// A matrix expected to be a time-oriented Lorentz isometry is not.
    #[error("matrix is not a time-oriented Lorentz isometry (residual {residual:.3e})")]
    NotLorentz { residual: f64 },

    /// A metric evaluated to something that is not symmetric positive-definite.
    #[error("metric degenerate or not positive-definite at {0}")]
    DegenerateMetric(String),

    /// Defining function has a critical point where a hypersurface normal is needed.
    #[error("critical point of defining function (|grad| = {grad_norm:.3e})")]
    CriticalPoint { grad_norm: f64 },

    /// Spinor features are restricted to even dimensions.
    #[error("spinors require even n (got n = {0})")]
    OddDimension(usize),

    /// A unit vector was expected.
    #[error("vector is not unit (|v| = {norm})")]
    NotUnit { norm: f64 },

    /// Boundary-condition sign does not match the Killing-connection sign.
    #[error("sign mismatch: Killing connection sign must match the boundary-condition sign")]
    SignMismatch,

    /// A spinor that must be a Q_theta eigenvector is not.
    #[error("spinor is not an eigenvector of the boundary operator (residual {residual:.3e})")]
    NotEigenvector { residual: f64 },

    /// The requested potential is not admissible for the domain's mass functional.
    #[error("potential not admissible for this domain: {0}")]
    InadmissiblePotential(String),

    /// Wrong domain kind for the requested operation.
    #[error("operation requires a {expected} domain, got {got}")]
    WrongDomain {
        expected: &'static str,
        got: &'static str,
    },

    /// Radius schedule too short or not increasing.
    #[error("invalid radius schedule: {0}")]
    BadSchedule(String),

    /// An isometry does not preserve the domain required by the representation action.
    #[error("isometry does not preserve the domain: {0}")]
    DomainNotPreserved(String),

    /// Configuration failed validation.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
