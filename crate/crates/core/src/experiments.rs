//! Trajectory tables and long-time parameter sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DephaseError, Result};
use crate::metrics::{linear_entropy, trace_distance};
use crate::model::{
    decoherence_factor, normalization_c, product_factor, rho_correlated, rho_product, InitState,
};
use crate::specfun::{kernels_at, kernels_limit, EnvSpec};

const BOUND_SLACK: f64 = 1e-12;

/// Absolute floor used by [`saturation_time`] when the limit itself is zero.
pub const SATURATION_FLOOR: f64 = 1e-14;

/// Geometric grid `first·ratio^k ≤ end` closed by `end`, optionally preceded by `t = 0`.
pub fn geometric_grid(first: f64, ratio: f64, end: f64, include_zero: bool) -> Result<Vec<f64>> {
    if !(first > 0.0 && ratio > 1.0 && end >= first && end.is_finite()) {
        return Err(DephaseError::InvalidGrid(format!(
            "geometric grid needs 0 < first <= end and ratio > 1 (first={first}, ratio={ratio}, end={end})"
        )));
    }
    let mut grid = Vec::new();
    if include_zero {
        grid.push(0.0);
    }
    let mut k = 0;
    loop {
        let t = first * ratio.powi(k);
        if t > end * (1.0 + 1e-12) {
            break;
        }
        grid.push(t);
        k += 1;
    }
    if grid.last().is_some_and(|&t| t < end * (1.0 - 1e-12)) {
        grid.push(end);
    }
    Ok(grid)
}

/// `n` evenly spaced points on `[start, end]`.
pub fn linear_grid(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(end > start) || !start.is_finite() || !end.is_finite() {
        return Err(DephaseError::InvalidGrid(format!(
            "linear grid needs n >= 2 and start < end (start={start}, end={end}, n={n})"
        )));
    }
    let step = (end - start) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            if i + 1 == n {
                end
            } else {
                start + step * i as f64
            }
        })
        .collect())
}

/// `n` log-spaced points on `[start, end]`.
pub fn log_grid(start: f64, end: f64, n: usize) -> Result<Vec<f64>> {
    if !(start > 0.0) {
        return Err(DephaseError::InvalidGrid(format!(
            "log grid needs start > 0 (start={start})"
        )));
    }
    Ok(linear_grid(start.ln(), end.ln(), n)?
        .into_iter()
        .map(f64::exp)
        .collect())
}

fn check_increasing(grid: &[f64], what: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(DephaseError::InvalidGrid(format!("{what} grid is empty")));
    }
    if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
        return Err(DephaseError::InvalidGrid(format!(
            "{what} grid contains {bad}"
        )));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(DephaseError::InvalidGrid(format!(
            "{what} grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

/// One time point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub distance: f64,
    pub entropy_corr: f64,
    pub entropy_prod: f64,
    pub r: f64,
    pub s: f64,
    pub phi: f64,
    pub abs_a_corr: f64,
    pub abs_a_prod: f64,
}

impl TrajectoryRow {
    /// Re-checks the physical bounds every row must satisfy.
    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64, lo: f64, hi: f64| v >= lo - BOUND_SLACK && v <= hi + BOUND_SLACK;
        if !in_range(self.distance, 0.0, 1.0) {
            return Err(DephaseError::Unphysical(format!(
                "t={}: trace distance {} outside [0, 1]",
                self.t, self.distance
            )));
        }
        for (name, v) in [
            ("correlated", self.entropy_corr),
            ("product", self.entropy_prod),
        ] {
            if !in_range(v, 0.0, 0.5) {
                return Err(DephaseError::Unphysical(format!(
                    "t={}: {name} linear entropy {v} outside [0, 1/2]",
                    self.t
                )));
            }
        }
        for (name, v) in [
            ("correlated", self.abs_a_corr),
            ("product", self.abs_a_prod),
        ] {
            if !(v <= 1.0 + BOUND_SLACK) {
                return Err(DephaseError::Unphysical(format!(
                    "t={}: |A| of {name} trajectory is {v} > 1",
                    self.t
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryTable {
    pub rows: Vec<TrajectoryRow>,
}

fn trajectory_row(env: &EnvSpec, init: &InitState, t: f64) -> Result<TrajectoryRow> {
    let k = kernels_at(env, t)?;
    let a_corr = decoherence_factor(env, init, t)?.value;
    let a_prod = product_factor(env, init, t)?;
    let corr = rho_correlated(env, init, t)?;
    let prod = rho_product(env, init, t)?;
    Ok(TrajectoryRow {
        t,
        distance: trace_distance(&corr, &prod),
        entropy_corr: linear_entropy(&corr),
        entropy_prod: linear_entropy(&prod),
        r: k.r,
        s: k.s,
        phi: k.phi,
        abs_a_corr: a_corr.norm(),
        abs_a_prod: a_prod.norm(),
    })
}

/// Evaluates both reduced trajectories and their distance on `t_grid`.
pub fn trajectory(env: &EnvSpec, init: &InitState, t_grid: &[f64]) -> Result<TrajectoryTable> {
    check_increasing(t_grid, "time")?;
    if t_grid[0] < 0.0 {
        return Err(DephaseError::InvalidGrid(format!(
            "times must be >= 0 (first is {})",
            t_grid[0]
        )));
    }
    let rows = t_grid
        .par_iter()
        .map(|&t| trajectory_row(env, init, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(TrajectoryTable { rows })
}

/// Trace distance between the two trajectories at a single time.
pub fn distance_at(env: &EnvSpec, init: &InitState, t: f64) -> Result<f64> {
    let corr = rho_correlated(env, init, t)?;
    let prod = rho_product(env, init, t)?;
    Ok(trace_distance(&corr, &prod))
}

/// `D_T(∞) = |b_+ b_-| e^(-r_∞) C_λ⁻¹ λ (e^(s_∞) - e^(s(0)))`; needs `μ > 0`.
pub fn distance_limit(env: &EnvSpec, init: &InitState) -> Result<f64> {
    let lim = kernels_limit(env)?;
    let s0 = env.initial_s()?;
    let c = normalization_c(env, init.lambda())?;
    let amp = init.b_plus().norm() * init.b_minus().norm();
    let growth = s0.exp() * (lim.s - s0).exp_m1();
    Ok(amp * (-lim.r).exp() / c * init.lambda() * growth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    Alpha,
    Gamma,
    Mu,
    Lambda,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::Gamma => "gamma",
            SweepParameter::Mu => "mu",
            SweepParameter::Lambda => "lambda",
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = DephaseError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParameter::Alpha),
            "gamma" => Ok(SweepParameter::Gamma),
            "mu" => Ok(SweepParameter::Mu),
            "lambda" => Ok(SweepParameter::Lambda),
            other => Err(DephaseError::InvalidGrid(format!(
                "unknown sweep parameter `{other}` (expected alpha, gamma, mu or lambda)"
            ))),
        }
    }
}

/// How sweep values for `alpha`/`gamma` map onto the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SweepScale {
    /// Values are `α·ω_c^μ` or `γ·ω_c^ν`; a `mu` sweep keeps `α·ω_c^μ` fixed.
    #[default]
    Dimensionless,
    /// Values are raw `α` or `γ`; a `mu` sweep keeps raw `α` fixed.
    Raw,
}

/// Where along the trajectory each sweep point is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Default)]
pub enum Horizon {
    /// Analytic long-time limit.
    #[default]
    Infinite,
    Time(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub scale: SweepScale,
    pub horizon: Horizon,
    pub env: EnvSpec,
    pub init: InitState,
    pub rows: Vec<SweepRow>,
}

fn point_setup(
    env: &EnvSpec,
    init: &InitState,
    parameter: SweepParameter,
    scale: SweepScale,
    value: f64,
) -> Result<(EnvSpec, InitState)> {
    let wc = env.omega_c();
    Ok(match (parameter, scale) {
        (SweepParameter::Alpha, SweepScale::Dimensionless) => {
            (env.with_alpha(value / wc.powf(env.mu()))?, *init)
        }
        (SweepParameter::Alpha, SweepScale::Raw) => (env.with_alpha(value)?, *init),
        (SweepParameter::Gamma, SweepScale::Dimensionless) => {
            (env.with_gamma(value / wc.powf(env.nu()))?, *init)
        }
        (SweepParameter::Gamma, SweepScale::Raw) => (env.with_gamma(value)?, *init),
        (SweepParameter::Mu, SweepScale::Dimensionless) => {
            (env.with_mu_fixed_coupling(value)?, *init)
        }
        (SweepParameter::Mu, SweepScale::Raw) => (
            EnvSpec::new(env.alpha(), value, env.gamma(), env.nu(), wc)?,
            *init,
        ),
        (SweepParameter::Lambda, _) => (*env, init.with_lambda(value)?),
    })
}

/// Long-time trace distance over `grid` with dimensionless scaling.
pub fn sweep(
    env: &EnvSpec,
    init: &InitState,
    parameter: SweepParameter,
    grid: &[f64],
) -> Result<SweepTable> {
    sweep_with(
        env,
        init,
        parameter,
        grid,
        SweepScale::Dimensionless,
        Horizon::Infinite,
    )
}

/// General sweep: choice of value scaling and evaluation horizon.
pub fn sweep_with(
    env: &EnvSpec,
    init: &InitState,
    parameter: SweepParameter,
    grid: &[f64],
    scale: SweepScale,
    horizon: Horizon,
) -> Result<SweepTable> {
    check_increasing(grid, "sweep")?;
    if let Horizon::Time(t) = horizon {
        if !(t >= 0.0) {
            return Err(DephaseError::InvalidParameter {
                name: "at_time",
                value: t,
                constraint: "must be >= 0",
            });
        }
    }
    let rows = grid
        .par_iter()
        .map(|&value| {
            let (e, i) = point_setup(env, init, parameter, scale, value)?;
            let distance = match horizon {
                Horizon::Infinite => distance_limit(&e, &i)?,
                Horizon::Time(t) => distance_at(&e, &i, t)?,
            };
            if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&distance) {
                return Err(DephaseError::Unphysical(format!(
                    "{parameter}={value}: trace distance {distance} outside [0, 1]"
                )));
            }
            Ok(SweepRow { value, distance })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter,
        scale,
        horizon,
        env: *env,
        init: *init,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Max,
    Min,
    None,
}

impl fmt::Display for ExtremumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtremumKind::Max => "max",
            ExtremumKind::Min => "min",
            ExtremumKind::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub kind: ExtremumKind,
    pub location: Option<f64>,
    pub value: Option<f64>,
}

impl Extremum {
    fn none() -> Self {
        Self {
            kind: ExtremumKind::None,
            location: None,
            value: None,
        }
    }
}

/// Strict interior global extremum of a sweep, if any.
///
/// The global maximum (first occurrence) counts when it lies off both
/// endpoints and strictly exceeds them; likewise for the minimum. If both
/// qualify, the one standing further from the endpoint values wins.
pub fn detect_extremum(table: &SweepTable) -> Extremum {
    let rows = &table.rows;
    let n = rows.len();
    if n < 3 {
        return Extremum::none();
    }
    let first = rows[0].distance;
    let last = rows[n - 1].distance;
    let mut imax = 0;
    let mut imin = 0;
    for (i, row) in rows.iter().enumerate() {
        if row.distance > rows[imax].distance {
            imax = i;
        }
        if row.distance < rows[imin].distance {
            imin = i;
        }
    }
    let vmax = rows[imax].distance;
    let vmin = rows[imin].distance;
    let max_height =
        (imax > 0 && imax < n - 1 && vmax > first && vmax > last).then(|| vmax - first.max(last));
    let min_depth =
        (imin > 0 && imin < n - 1 && vmin < first && vmin < last).then(|| first.min(last) - vmin);
    let pick = |kind, i: usize| Extremum {
        kind,
        location: Some(rows[i].value),
        value: Some(rows[i].distance),
    };
    match (max_height, min_depth) {
        (Some(h), Some(d)) if d > h => pick(ExtremumKind::Min, imin),
        (Some(_), _) => pick(ExtremumKind::Max, imax),
        (None, Some(_)) => pick(ExtremumKind::Min, imin),
        (None, None) => Extremum::none(),
    }
}

/// Doubling grid searched by [`saturation_time`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaturationSearch {
    pub first: f64,
    pub horizon: f64,
}

impl Default for SaturationSearch {
    fn default() -> Self {
        Self {
            first: 1e-2,
            horizon: 1e12,
        }
    }
}

/// Earliest grid time after which `D_T(t)` stays within `tol·D_T(∞)` of its limit.
///
/// The grid is `{0} ∪ {first·2^k ≤ horizon}`. A deviation of at most
/// [`SATURATION_FLOOR`] is always accepted so that identically vanishing
/// distances count as saturated from `t = 0`.
pub fn saturation_time(env: &EnvSpec, init: &InitState, tol: f64) -> Result<f64> {
    saturation_time_with(env, init, tol, SaturationSearch::default())
}

pub fn saturation_time_with(
    env: &EnvSpec,
    init: &InitState,
    tol: f64,
    search: SaturationSearch,
) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(DephaseError::InvalidParameter {
            name: "tol",
            value: tol,
            constraint: "must be > 0",
        });
    }
    let limit = distance_limit(env, init)?;
    let grid = geometric_grid(search.first, 2.0, search.horizon, true)?;
    let allowed = (tol * limit).max(SATURATION_FLOOR);
    let deviations = grid
        .par_iter()
        .map(|&t| Ok((distance_at(env, init, t)? - limit).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let last = *deviations.last().expect("grid contains t = 0");
    if last > allowed {
        return Err(DephaseError::NotSaturated {
            horizon: *grid.last().unwrap(),
            deviation: last,
        });
    }
    let start = deviations
        .iter()
        .rposition(|&d| d > allowed)
        .map_or(0, |i| i + 1);
    Ok(grid[start])
}
