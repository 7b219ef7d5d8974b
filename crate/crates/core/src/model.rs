//! Reduced qubit dynamics from a correlated and from a product initial state.
//!
//! The correlated composite state is
//! `b_+|1⟩⊗|Ω_0⟩ + b_-|-1⟩⊗|Ω_λ⟩` with
//! `|Ω_λ⟩ ∝ (1-λ)|Ω_0⟩ + λ|Ω_f⟩`. The product state pairs the same reduced
//! qubit state with the environment vacuum. Populations never change;
//! only the coherence picks up a decoherence factor.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{DephaseError, Result};
use crate::specfun::{kernels_at, vacuum_overlap, EnvSpec};

const NORM_TOL: f64 = 1e-12;
const POSITIVITY_SLACK: f64 = 1e-12;

/// Qubit amplitudes, correlation strength and energy splitting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitState {
    #[serde(serialize_with = "ser_complex")]
    b_plus: Complex64,
    #[serde(serialize_with = "ser_complex")]
    b_minus: Complex64,
    lambda: f64,
    epsilon: f64,
}

fn ser_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut tup = s.serialize_tuple(2)?;
    tup.serialize_element(&c.re)?;
    tup.serialize_element(&c.im)?;
    tup.end()
}

impl InitState {
    pub fn new(b_plus: Complex64, b_minus: Complex64, lambda: f64, epsilon: f64) -> Result<Self> {
        let norm = b_plus.norm_sqr() + b_minus.norm_sqr();
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(DephaseError::InvalidParameter {
                name: "|b_+|^2 + |b_-|^2",
                value: norm,
                constraint: "amplitudes must be normalized",
            });
        }
        if b_plus.norm_sqr() == 0.0 {
            return Err(DephaseError::InvalidParameter {
                name: "b_plus",
                value: 0.0,
                constraint: "amplitude must be non-zero",
            });
        }
        if b_minus.norm_sqr() == 0.0 {
            return Err(DephaseError::InvalidParameter {
                name: "b_minus",
                value: 0.0,
                constraint: "amplitude must be non-zero",
            });
        }
        check_lambda(lambda)?;
        if !epsilon.is_finite() {
            return Err(DephaseError::InvalidParameter {
                name: "epsilon",
                value: epsilon,
                constraint: "must be finite",
            });
        }
        Ok(Self {
            b_plus,
            b_minus,
            lambda,
            epsilon,
        })
    }

    /// Real positive amplitudes `b_+ = √p`, `b_- = √(1-p)`.
    pub fn from_population(p_plus: f64, lambda: f64, epsilon: f64) -> Result<Self> {
        if !(p_plus > 0.0 && p_plus < 1.0) {
            return Err(DephaseError::InvalidParameter {
                name: "p_plus",
                value: p_plus,
                constraint: "must lie strictly inside (0, 1)",
            });
        }
        Self::new(
            Complex64::new(p_plus.sqrt(), 0.0),
            Complex64::new((1.0 - p_plus).sqrt(), 0.0),
            lambda,
            epsilon,
        )
    }

    pub fn b_plus(&self) -> Complex64 {
        self.b_plus
    }
    pub fn b_minus(&self) -> Complex64 {
        self.b_minus
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn p_plus(&self) -> f64 {
        self.b_plus.norm_sqr()
    }

    pub fn with_lambda(&self, lambda: f64) -> Result<Self> {
        Self::new(self.b_plus, self.b_minus, lambda, self.epsilon)
    }

    fn amplitude_product(&self) -> Complex64 {
        self.b_plus * self.b_minus.conj()
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda) {
        Ok(())
    } else {
        Err(DephaseError::InvalidParameter {
            name: "lambda",
            value: lambda,
            constraint: "must lie in [0, 1]",
        })
    }
}

/// 2×2 qubit density matrix in the basis `{|1⟩, |-1⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitState {
    p_plus: f64,
    #[serde(serialize_with = "ser_complex")]
    coherence: Complex64,
}

impl QubitState {
    pub fn new(p_plus: f64, coherence: Complex64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_plus) {
            return Err(DephaseError::Unphysical(format!(
                "population {p_plus} outside [0, 1]"
            )));
        }
        let excess = coherence.norm_sqr() - p_plus * (1.0 - p_plus);
        if !(excess <= POSITIVITY_SLACK) {
            return Err(DephaseError::Unphysical(format!(
                "|coherence|^2 exceeds p(1-p) by {excess:e}"
            )));
        }
        Ok(Self { p_plus, coherence })
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }

    pub fn p_minus(&self) -> f64 {
        1.0 - self.p_plus
    }

    /// Element `⟨1|ρ|-1⟩`.
    pub fn coherence(&self) -> Complex64 {
        self.coherence
    }

    pub fn trace(&self) -> f64 {
        self.p_plus + self.p_minus()
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.p_plus, 0.0), self.coherence],
            [self.coherence.conj(), Complex64::new(self.p_minus(), 0.0)],
        ]
    }
}

/// Complex multiplier `A_λ(t)` of the qubit coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFactor {
    pub value: Complex64,
    pub lambda: f64,
    pub t: f64,
}

/// `C_λ = √[(1-λ)² + λ² + 2λ(1-λ)·⟨Ω_0|Ω_f⟩]`.
pub fn normalization_c(env: &EnvSpec, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let overlap = vacuum_overlap(env)?;
    let one_minus = 1.0 - lambda;
    Ok((one_minus * one_minus + lambda * lambda + 2.0 * lambda * one_minus * overlap).sqrt())
}

/// `A_λ(t) = C_λ⁻¹ e^(-2iεt - r(t)) [1 - λ + λ e^(-2iΦ(t) + s(t))]`.
pub fn decoherence_factor(env: &EnvSpec, init: &InitState, t: f64) -> Result<DecoherenceFactor> {
    factor_for_lambda(env, init.lambda, init.epsilon, t)
}

fn factor_for_lambda(
    env: &EnvSpec,
    lambda: f64,
    epsilon: f64,
    t: f64,
) -> Result<DecoherenceFactor> {
    let k = kernels_at(env, t)?;
    let c = normalization_c(env, lambda)?;
    let carrier = Complex64::new(-k.r, -2.0 * epsilon * t).exp();
    let displaced = Complex64::new(k.s, -2.0 * k.phi).exp();
    let bracket = Complex64::new(1.0 - lambda, 0.0) + displaced * lambda;
    Ok(DecoherenceFactor {
        value: carrier * bracket / c,
        lambda,
        t,
    })
}

/// Reduced state evolved from the correlated composite state.
pub fn rho_correlated(env: &EnvSpec, init: &InitState, t: f64) -> Result<QubitState> {
    let a = decoherence_factor(env, init, t)?;
    QubitState::new(init.p_plus(), init.amplitude_product() * a.value)
}

/// Coherence factor `A_λ(0)·A_0(t)` of the product-state evolution.
pub fn product_factor(env: &EnvSpec, init: &InitState, t: f64) -> Result<Complex64> {
    let start = decoherence_factor(env, init, 0.0)?;
    let free = factor_for_lambda(env, 0.0, init.epsilon, t)?;
    Ok(start.value * free.value)
}

/// Applies the vacuum-environment dephasing channel to an arbitrary qubit state:
/// populations are kept and the coherence is multiplied by `A_0(t)`.
pub fn dephasing_channel(
    env: &EnvSpec,
    epsilon: f64,
    rho: &QubitState,
    t: f64,
) -> Result<QubitState> {
    let free = factor_for_lambda(env, 0.0, epsilon, t)?;
    QubitState::new(rho.p_plus, rho.coherence * free.value)
}

/// Reduced state evolved from the product of the same initial qubit state with the vacuum.
pub fn rho_product(env: &EnvSpec, init: &InitState, t: f64) -> Result<QubitState> {
    let a = product_factor(env, init, t)?;
    QubitState::new(init.p_plus(), init.amplitude_product() * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma_fn;
    use approx::assert_relative_eq;

    fn reference_env() -> EnvSpec {
        EnvSpec::dimensionless(0.01, 0.01, 0.05, 0.2).unwrap()
    }

    #[test]
    fn normalization_endpoints_and_midpoint() {
        let env = reference_env();
        assert_eq!(normalization_c(&env, 0.0).unwrap(), 1.0);
        assert_eq!(normalization_c(&env, 1.0).unwrap(), 1.0);
        let overlap = (-0.025 * gamma_fn(0.2).unwrap()).exp();
        let expected = (0.5 + 0.5 * overlap).sqrt();
        assert_relative_eq!(
            normalization_c(&env, 0.5).unwrap(),
            expected,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            normalization_c(&env, 0.5).unwrap(),
            0.972515,
            max_relative = 1e-6
        );
        assert!(normalization_c(&env, 1.5).is_err());
    }

    #[test]
    fn uncorrelated_factor_is_pure_decay() {
        let env = reference_env();
        let init = InitState::from_population(0.5, 0.0, 1.0).unwrap();
        for t in [0.0, 0.7, 12.0] {
            let a = decoherence_factor(&env, &init, t).unwrap().value;
            let r = kernels_at(&env, t).unwrap().r;
            let expected = Complex64::new(-r, -2.0 * t).exp();
            assert_relative_eq!(a.re, expected.re, epsilon = 1e-15);
            assert_relative_eq!(a.im, expected.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn initial_factor_is_real_and_bounded() {
        let env = reference_env();
        for lambda in [0.0, 0.3, 0.8, 1.0] {
            let init = InitState::from_population(0.5, lambda, 1.0).unwrap();
            let a = decoherence_factor(&env, &init, 0.0).unwrap().value;
            assert_eq!(a.im, 0.0);
            assert!(a.re > 0.0 && a.re <= 1.0);
        }
    }

    #[test]
    fn shared_start_and_uncorrelated_collapse() {
        let env = reference_env();
        let init = InitState::from_population(0.3, 0.6, 1.0).unwrap();
        assert_eq!(
            rho_correlated(&env, &init, 0.0).unwrap(),
            rho_product(&env, &init, 0.0).unwrap()
        );
        let init0 = init.with_lambda(0.0).unwrap();
        for t in [0.1, 1.0, 50.0] {
            let a = rho_correlated(&env, &init0, t).unwrap();
            let b = rho_product(&env, &init0, t).unwrap();
            assert!((a.coherence() - b.coherence()).norm() <= 1e-14);
        }
    }

    #[test]
    fn zero_coupling_keeps_product_coherence_magnitude() {
        let env = EnvSpec::dimensionless(0.0, 0.3, 0.05, 0.2).unwrap();
        let init = InitState::from_population(0.5, 0.75, 1.0).unwrap();
        let c0 = rho_product(&env, &init, 0.0).unwrap().coherence().norm();
        for t in [1.0, 10.0, 1e3] {
            let c = rho_product(&env, &init, t).unwrap().coherence().norm();
            assert_relative_eq!(c, c0, max_relative = 1e-14);
        }
    }

    #[test]
    fn init_state_validation() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(InitState::new(Complex64::new(h, 0.0), Complex64::new(0.0, h), 0.5, 1.0).is_ok());
        assert!(
            InitState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0.5, 1.0).is_err()
        );
        assert!(
            InitState::new(Complex64::new(0.5, 0.0), Complex64::new(0.5, 0.0), 0.5, 1.0).is_err()
        );
        assert!(InitState::from_population(0.5, -0.1, 1.0).is_err());
        assert!(InitState::from_population(0.5, 1.1, 1.0).is_err());
        assert!(InitState::from_population(1.0, 0.5, 1.0).is_err());
        assert!(InitState::from_population(0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn qubit_state_positivity_check() {
        assert!(QubitState::new(0.5, Complex64::new(0.5, 0.0)).is_ok());
        assert!(QubitState::new(0.5, Complex64::new(0.6, 0.0)).is_err());
        assert!(QubitState::new(1.2, Complex64::new(0.0, 0.0)).is_err());
        let s = QubitState::new(0.25, Complex64::new(0.1, -0.2)).unwrap();
        assert_eq!(s.trace(), 1.0);
        assert_eq!(s.matrix()[1][0], Complex64::new(0.1, 0.2));
    }
}
