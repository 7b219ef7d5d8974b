//! Exact pure-dephasing dynamics of a qubit in a bosonic bath, started either
//! from a qubit-environment correlated state or from the product state with
//! the same reduced qubit state.
//!
//! - [`specfun`]: Gamma function and closed-form kernels `r`, `s`, `Φ`.
//! - [`quadrature`]: independent adaptive-quadrature oracle for the same kernels.
//! - [`model`]: decoherence factor and the two reduced trajectories.
//! - [`metrics`]: trace distance and linear entropy.
//! - [`experiments`]: trajectory tables, long-time sweeps, extremum and saturation search.
//! - [`verify`]: closed form vs. oracle certification.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiments;
pub mod metrics;
pub mod model;
pub mod quadrature;
pub mod specfun;
pub mod verify;

pub use error::{DephaseError, Result};
pub use experiments::{
    detect_extremum, distance_at, distance_limit, saturation_time, sweep, sweep_with, trajectory,
    Extremum, ExtremumKind, Horizon, SweepParameter, SweepScale, SweepTable, TrajectoryRow,
    TrajectoryTable,
};
pub use metrics::{entropy_correlated, entropy_product, linear_entropy, purity, trace_distance};
pub use model::{
    decoherence_factor, normalization_c, rho_correlated, rho_product, DecoherenceFactor, InitState,
    QubitState,
};
pub use quadrature::{integrate_phi, integrate_r, integrate_s, Estimate, QuadSpec};
pub use specfun::{
    gamma_fn, kernel_l, kernels_at, kernels_limit, vacuum_overlap, DephasingKernels, EnvSpec,
};
