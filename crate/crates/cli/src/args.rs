use clap::{Args, Parser, Subcommand, ValueEnum};
use dephase_core::experiments::{geometric_grid, linear_grid, log_grid};
use dephase_core::{EnvSpec, Horizon, InitState, SweepParameter};
use serde::Serialize;

pub const DEFAULT_ALPHA_DIMLESS: f64 = 0.01;
pub const DEFAULT_GAMMA_DIMLESS: f64 = 0.05;
pub const DEFAULT_MU: f64 = 0.01;
pub const DEFAULT_NU: f64 = 0.2;

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "dephase",
    version,
    about = "Qubit pure dephasing from correlated vs. product initial states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "subcommand")]
pub enum Command {
    /// Time evolution of the trace distance and linear entropies
    Trajectory(TrajectoryArgs),
    /// Long-time trace distance over a parameter grid
    Sweep(SweepArgs),
    /// Check closed-form kernels against adaptive quadrature
    Verify(VerifyArgs),
}

/// Environment parameters. Dimensionless mode (default) fixes ω_c = 1.
#[derive(Debug, Args, Serialize, Clone, Default)]
pub struct EnvArgs {
    /// Dimensionless coupling α·ω_c^μ [default: 0.01]
    #[arg(long, conflicts_with_all = ["alpha", "gamma", "omega_c"])]
    pub alpha_dimless: Option<f64>,
    /// Dimensionless coherent amplitude γ·ω_c^ν [default: 0.05]
    #[arg(long, conflicts_with_all = ["alpha", "gamma", "omega_c"])]
    pub gamma_dimless: Option<f64>,
    /// Raw coupling α (requires --gamma and --omega-c)
    #[arg(long, requires_all = ["gamma", "omega_c"])]
    pub alpha: Option<f64>,
    /// Raw coherent amplitude γ (requires --alpha and --omega-c)
    #[arg(long, requires_all = ["alpha", "omega_c"])]
    pub gamma: Option<f64>,
    /// Cutoff frequency ω_c (requires --alpha and --gamma)
    #[arg(long, requires_all = ["alpha", "gamma"])]
    pub omega_c: Option<f64>,
    /// Ohmicity μ [default: 0.01]
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Coherent-profile exponent ν [default: 0.2]
    #[arg(long)]
    pub nu: Option<f64>,
}

impl EnvArgs {
    pub fn is_specified(&self) -> bool {
        self.alpha_dimless.is_some()
            || self.gamma_dimless.is_some()
            || self.alpha.is_some()
            || self.mu.is_some()
            || self.nu.is_some()
    }

    pub fn build(&self) -> dephase_core::Result<EnvSpec> {
        let mu = self.mu.unwrap_or(DEFAULT_MU);
        let nu = self.nu.unwrap_or(DEFAULT_NU);
        match (self.alpha, self.gamma, self.omega_c) {
            (Some(alpha), Some(gamma), Some(omega_c)) => {
                EnvSpec::new(alpha, mu, gamma, nu, omega_c)
            }
            _ => EnvSpec::dimensionless(
                self.alpha_dimless.unwrap_or(DEFAULT_ALPHA_DIMLESS),
                mu,
                self.gamma_dimless.unwrap_or(DEFAULT_GAMMA_DIMLESS),
                nu,
            ),
        }
    }
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct InitArgs {
    /// Correlation strength λ ∈ [0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Qubit energy splitting ε in units of ω_c
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub eps: f64,
    /// Excited-state population |b_+|²
    #[arg(long, default_value_t = 0.5)]
    pub p_plus: f64,
}

impl InitArgs {
    pub fn build(&self) -> dephase_core::Result<InitState> {
        InitState::from_population(self.p_plus, self.lambda, self.eps)
    }
}

#[derive(Debug, Args, Serialize, Clone)]
pub struct GridArgs {
    /// Last time point (units of 1/ω_c)
    #[arg(long, default_value_t = 1e3)]
    pub t_max: f64,
    /// First non-zero time of the geometric grid
    #[arg(long, default_value_t = 1e-2)]
    pub t_first: f64,
    /// Ratio of consecutive geometric grid points
    #[arg(long, default_value_t = 1.05)]
    pub ratio: f64,
    /// Use N evenly spaced points on [0, t_max] instead
    #[arg(long, value_name = "N")]
    pub linear: Option<usize>,
    /// Leave t = 0 out of the geometric grid
    #[arg(long)]
    pub no_zero: bool,
}

impl GridArgs {
    pub fn build(&self) -> dephase_core::Result<Vec<f64>> {
        match self.linear {
            Some(n) => linear_grid(0.0, self.t_max, n),
            None => geometric_grid(self.t_first, self.ratio, self.t_max, !self.no_zero),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub env: EnvArgs,
    #[command(flatten)]
    pub init: InitArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output CSV path (joined to $DEPHASE_OUT_DIR when relative)
    #[arg(long, default_value = "trajectory.csv")]
    pub out: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamArg {
    Alpha,
    Gamma,
    Mu,
    Lambda,
}

impl From<ParamArg> for SweepParameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Alpha => SweepParameter::Alpha,
            ParamArg::Gamma => SweepParameter::Gamma,
            ParamArg::Mu => SweepParameter::Mu,
            ParamArg::Lambda => SweepParameter::Lambda,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Args, Serialize)]
pub struct SweepArgs {
    /// Parameter to sweep
    #[arg(long, value_enum)]
    pub param: ParamArg,
    /// First grid value [default depends on --param]
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid value [default depends on --param]
    #[arg(long)]
    pub to: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    pub points: Option<usize>,
    /// Grid spacing [default: log for alpha/gamma, linear for mu/lambda]
    #[arg(long, value_enum)]
    pub spacing: Option<Spacing>,
    /// Evaluation time: `inf` for the analytic long-time limit, or a time in units of 1/ω_c
    #[arg(long, default_value = "inf")]
    pub at_time: String,
    /// Interpret alpha/gamma sweep values as raw α, γ rather than α·ω_c^μ, γ·ω_c^ν
    #[arg(long)]
    pub raw_sweep: bool,
    #[command(flatten)]
    pub env: EnvArgs,
    #[command(flatten)]
    pub init: InitArgs,
    /// Output CSV path (joined to $DEPHASE_OUT_DIR when relative)
    #[arg(long, default_value = "sweep.csv")]
    pub out: String,
}

impl SweepArgs {
    pub fn horizon(&self) -> anyhow::Result<Horizon> {
        let s = self.at_time.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(Horizon::Infinite);
        }
        let t: f64 = s
            .parse()
            .map_err(|_| anyhow::anyhow!("--at-time expects `inf` or a number, got `{s}`"))?;
        Ok(Horizon::Time(t))
    }

    pub fn grid(&self) -> dephase_core::Result<Vec<f64>> {
        let (from, to, points, spacing) = match self.param {
            ParamArg::Alpha => (1e-4, 10.0, 121, Spacing::Log),
            ParamArg::Gamma => (1e-3, 2.0, 121, Spacing::Log),
            ParamArg::Mu => (0.01, 3.0, 121, Spacing::Linear),
            ParamArg::Lambda => (0.0, 1.0, 21, Spacing::Linear),
        };
        let from = self.from.unwrap_or(from);
        let to = self.to.unwrap_or(to);
        let points = self.points.unwrap_or(points);
        match self.spacing.unwrap_or(spacing) {
            Spacing::Log => log_grid(from, to, points),
            Spacing::Linear => linear_grid(from, to, points),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Relative agreement required between closed form and quadrature
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    /// Absolute agreement accepted when the quadrature value is below 1e-4
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,
    /// Quadrature relative tolerance
    #[arg(long, default_value_t = 1e-10)]
    pub quad_rel_tol: f64,
    /// Quadrature absolute tolerance
    #[arg(long, default_value_t = 1e-14)]
    pub quad_abs_tol: f64,
    /// Quadrature subdivision budget
    #[arg(long, default_value_t = 2000)]
    pub max_subdivisions: usize,
    /// Extra point: environment (any flag below adds it to the built-in grid)
    #[command(flatten)]
    pub env: EnvArgs,
    /// Times for the extra point [default: the built-in time list]
    #[arg(long = "t", value_delimiter = ',')]
    pub times: Vec<f64>,
    /// Skip the built-in grid and check only the extra point
    #[arg(long)]
    pub only_point: bool,
}
