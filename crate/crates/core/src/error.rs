use thiserror::Error;

/// Errors produced by the dephasing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DephaseError {
    /// Argument lies outside the domain of a special function (e.g. a Gamma pole).
    #[error("domain error in {function}: argument {value} ({reason})")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A model parameter violates one of its invariants.
    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions: \
         estimate {value:e}, error {achieved:e} > requested {requested:e}"
    )]
    Convergence {
        value: f64,
        achieved: f64,
        requested: f64,
        subdivisions: usize,
    },

    /// A time or sweep grid is malformed.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A computed state violates positivity or a bound it must satisfy.
    #[error("unphysical state: {0}")]
    Unphysical(String),

    /// The trace distance did not settle to its long-time limit below the horizon.
    #[error(
        "trace distance not saturated below horizon t = {horizon}: last deviation {deviation:e}"
    )]
    NotSaturated { horizon: f64, deviation: f64 },
}

pub type Result<T> = std::result::Result<T, DephaseError>;
