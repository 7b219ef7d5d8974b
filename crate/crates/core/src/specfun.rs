//! Euler Gamma function and closed-form dephasing kernels.
//!
//! The environment is a bosonic bath with spectral density
//! `g_h²(ω) = α ω^(μ-1) e^(-ω/ω_c)` and a coherent-state profile
//! `f²(ω) = γ ω^(ν-1) e^(-ω/ω_c)`. Every integral of the form
//! `∫ ω^(m-1) e^(-ω/ω_c) [1 - cos ωt] dω` then has the closed form
//! `Γ(m) ω_c^m {1 - cos[m·atan(ω_c t)] / (1 + ω_c² t²)^(m/2)}`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{DephaseError, Result};

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Euler Gamma function on `x > -1`, `x != 0`.
///
/// Lanczos approximation (g = 7, 9 terms) for `x >= 0.5`, reflection below.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(DephaseError::Domain {
            function: "gamma_fn",
            value: x,
            reason: "argument must be finite",
        });
    }
    if x <= -1.0 {
        return Err(DephaseError::Domain {
            function: "gamma_fn",
            value: x,
            reason: "only x > -1 is supported",
        });
    }
    if x == 0.0 {
        return Err(DephaseError::Domain {
            function: "gamma_fn",
            value: x,
            reason: "pole of the Gamma function",
        });
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma_unchecked(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        // t^(z+0.5) split in two halves so large arguments overflow later
        let half = t.powf(0.5 * (z + 0.5));
        (2.0 * PI).sqrt() * half * (acc * (-t).exp()) * half
    }
}

/// `1 - cos(m·atan x) / (1 + x²)^(m/2)`, evaluated without cancellation near x = 0.
fn cosine_bracket(m: f64, x: f64) -> f64 {
    let log_mod = -0.5 * m * (x * x).ln_1p();
    let theta = m * x.atan();
    let half_sin = (0.5 * theta).sin();
    -log_mod.exp_m1() + log_mod.exp() * 2.0 * half_sin * half_sin
}

/// `sin(m·atan x) / (1 + x²)^(m/2)`.
fn sine_bracket(m: f64, x: f64) -> f64 {
    (m * x.atan()).sin() * (-0.5 * m * (x * x).ln_1p()).exp()
}

/// Bath and coherent-state parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvSpec {
    alpha: f64,
    mu: f64,
    gamma: f64,
    nu: f64,
    omega_c: f64,
}

impl EnvSpec {
    /// Raw parameters with an explicit cutoff frequency.
    pub fn new(alpha: f64, mu: f64, gamma: f64, nu: f64, omega_c: f64) -> Result<Self> {
        let env = Self {
            alpha,
            mu,
            gamma,
            nu,
            omega_c,
        };
        env.validate()?;
        Ok(env)
    }

    /// Dimensionless products `α·ω_c^μ` and `γ·ω_c^ν` with `ω_c = 1`.
    pub fn dimensionless(alpha_dimless: f64, mu: f64, gamma_dimless: f64, nu: f64) -> Result<Self> {
        Self::new(alpha_dimless, mu, gamma_dimless, nu, 1.0)
    }

    fn validate(&self) -> Result<()> {
        let check = |ok: bool, name, value, constraint| {
            if ok {
                Ok(())
            } else {
                Err(DephaseError::InvalidParameter {
                    name,
                    value,
                    constraint,
                })
            }
        };
        check(
            self.alpha.is_finite() && self.alpha >= 0.0,
            "alpha",
            self.alpha,
            "must be finite and >= 0",
        )?;
        check(
            self.gamma.is_finite() && self.gamma >= 0.0,
            "gamma",
            self.gamma,
            "must be finite and >= 0",
        )?;
        check(
            self.omega_c.is_finite() && self.omega_c > 0.0,
            "omega_c",
            self.omega_c,
            "must be finite and > 0",
        )?;
        check(
            self.mu.is_finite() && self.mu > -1.0,
            "mu",
            self.mu,
            "must be > -1",
        )?;
        check(
            self.mu != 0.0,
            "mu",
            self.mu,
            "ohmic case mu = 0 is not supported (Gamma pole)",
        )?;
        check(
            self.nu.is_finite() && self.nu > 0.0,
            "nu",
            self.nu,
            "must be > 0",
        )?;
        check(
            self.kappa() != 0.0,
            "kappa",
            self.kappa(),
            "(mu + nu)/2 must not be 0 (Gamma pole)",
        )
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    /// Cross-term exponent `κ = (μ + ν)/2`.
    pub fn kappa(&self) -> f64 {
        0.5 * (self.mu + self.nu)
    }

    /// Cross-term amplitude `√(αγ)`.
    pub fn cross_amplitude(&self) -> f64 {
        (self.alpha * self.gamma).sqrt()
    }

    /// `α·ω_c^μ`.
    pub fn alpha_dimless(&self) -> f64 {
        self.alpha * self.omega_c.powf(self.mu)
    }

    /// `γ·ω_c^ν`.
    pub fn gamma_dimless(&self) -> f64 {
        self.gamma * self.omega_c.powf(self.nu)
    }

    /// Same environment with a new raw coupling `α`.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.mu, self.gamma, self.nu, self.omega_c)
    }

    /// Same environment with a new raw amplitude `γ`.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.alpha, self.mu, gamma, self.nu, self.omega_c)
    }

    /// New ohmicity with `α` rescaled so that `α·ω_c^μ` is unchanged.
    pub fn with_mu_fixed_coupling(&self, mu: f64) -> Result<Self> {
        let alpha = self.alpha_dimless() / self.omega_c.powf(mu);
        Self::new(alpha, mu, self.gamma, self.nu, self.omega_c)
    }

    /// Time-independent part of `s(t)`: `-(1/2)·γ·Γ(ν)·ω_c^ν`.
    pub fn initial_s(&self) -> Result<f64> {
        Ok(-0.5 * self.gamma * gamma_fn(self.nu)? * self.omega_c.powf(self.nu))
    }
}

/// The triple `(r, s, Φ)` entering the decoherence factor at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DephasingKernels {
    pub t: f64,
    pub r: f64,
    pub s: f64,
    pub phi: f64,
}

/// `𝓛(a, m, t) = a·Γ(m)·ω_c^m·{1 - cos[m·atan(ω_c t)] / (1 + ω_c² t²)^(m/2)}`.
pub fn kernel_l(a: f64, m: f64, t: f64, omega_c: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(DephaseError::InvalidParameter {
            name: "t",
            value: t,
            constraint: "time must be >= 0",
        });
    }
    let g = gamma_fn(m)?;
    if a == 0.0 || t == 0.0 {
        return Ok(0.0);
    }
    Ok(a * g * omega_c.powf(m) * cosine_bracket(m, omega_c * t))
}

/// Closed-form kernels `r(t)`, `s(t)`, `Φ(t)`.
pub fn kernels_at(env: &EnvSpec, t: f64) -> Result<DephasingKernels> {
    let wc = env.omega_c;
    let kappa = env.kappa();
    let cross = env.cross_amplitude();
    let r = 4.0 * kernel_l(env.alpha, env.mu, t, wc)?;
    let s = 2.0 * kernel_l(cross, kappa, t, wc)? + env.initial_s()?;
    let phi = if cross == 0.0 || t == 0.0 {
        0.0
    } else {
        cross * gamma_fn(kappa)? * wc.powf(kappa) * sine_bracket(kappa, wc * t)
    };
    Ok(DephasingKernels { t, r, s, phi })
}

/// Analytic `t → ∞` limit of the kernels; requires a super-ohmic bath (`μ > 0`).
pub fn kernels_limit(env: &EnvSpec) -> Result<DephasingKernels> {
    if env.mu <= 0.0 {
        return Err(DephaseError::Domain {
            function: "kernels_limit",
            value: env.mu,
            reason: "long-time limit requires mu > 0",
        });
    }
    let wc = env.omega_c;
    let kappa = env.kappa();
    let r = 4.0 * env.alpha * gamma_fn(env.mu)? * wc.powf(env.mu);
    let s = 2.0 * env.cross_amplitude() * gamma_fn(kappa)? * wc.powf(kappa) + env.initial_s()?;
    Ok(DephasingKernels {
        t: f64::INFINITY,
        r,
        s,
        phi: 0.0,
    })
}

/// `⟨Ω_0|Ω_f⟩ = exp(-(1/2)∫f²) = exp(s(0))`.
pub fn vacuum_overlap(env: &EnvSpec) -> Result<f64> {
    Ok(env.initial_s()?.exp())
}
