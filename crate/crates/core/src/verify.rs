//! Certification of the closed-form kernels against the quadrature oracle.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::quadrature::{integrate_phi, integrate_r, integrate_s, QuadSpec};
use crate::specfun::{kernels_at, EnvSpec};

/// Agreement threshold between closed form and oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    /// Absolute threshold applied when the oracle value is below `small`.
    pub abs: f64,
    pub small: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-8,
            abs: 1e-12,
            small: 1e-4,
        }
    }
}

impl Tolerance {
    pub fn accepts(&self, closed: f64, oracle: f64) -> bool {
        let diff = (closed - oracle).abs();
        diff <= self.rel * oracle.abs() || (oracle.abs() < self.small && diff <= self.abs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelName {
    R,
    S,
    Phi,
}

impl KernelName {
    pub fn as_str(self) -> &'static str {
        match self {
            KernelName::R => "r",
            KernelName::S => "s",
            KernelName::Phi => "phi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub env: EnvSpec,
    pub t: f64,
    pub kernel: KernelName,
    pub closed: f64,
    pub oracle: f64,
    pub oracle_error: f64,
    pub passed: bool,
}

impl Comparison {
    pub fn abs_error(&self) -> f64 {
        (self.closed - self.oracle).abs()
    }

    /// Relative error, or `0` when both values vanish.
    pub fn rel_error(&self) -> f64 {
        let d = self.abs_error();
        if d == 0.0 {
            0.0
        } else {
            d / self.oracle.abs()
        }
    }
}

/// Default certification grid: 5 ohmicities × 2 profile exponents × 21 times in `[0, 100]`.
pub fn default_points() -> Vec<(EnvSpec, f64)> {
    const TIMES: [f64; 21] = [
        0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 15.0, 20.0, 30.0, 40.0,
        50.0, 60.0, 75.0, 90.0, 100.0,
    ];
    let mut points = Vec::new();
    for mu in [-0.5, 0.01, 0.2, 1.0, 2.0] {
        for nu in [0.2, 1.0] {
            let env =
                EnvSpec::dimensionless(0.01, mu, 0.05, nu).expect("grid parameters are valid");
            points.extend(TIMES.iter().map(|&t| (env, t)));
        }
    }
    points
}

/// Compares `r`, `s` and `Φ` at every point.
pub fn certify(
    points: &[(EnvSpec, f64)],
    quad: &QuadSpec,
    tol: &Tolerance,
) -> Result<Vec<Comparison>> {
    let nested = points
        .par_iter()
        .map(|&(env, t)| {
            let k = kernels_at(&env, t)?;
            let oracle = [
                (KernelName::R, k.r, integrate_r(&env, t, quad)?),
                (KernelName::S, k.s, integrate_s(&env, t, quad)?),
                (KernelName::Phi, k.phi, integrate_phi(&env, t, quad)?),
            ];
            Ok(oracle
                .into_iter()
                .map(|(kernel, closed, est)| Comparison {
                    env,
                    t,
                    kernel,
                    closed,
                    oracle: est.value,
                    oracle_error: est.error,
                    passed: tol.accepts(closed, est.value),
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().collect())
}
