//! Trace distance, linear entropy and purity of qubit states.

use crate::error::Result;
use crate::model::{decoherence_factor, product_factor, InitState, QubitState};
use crate::specfun::EnvSpec;

/// `½ Σ |eig(ρ₁ - ρ₂)|`.
///
/// The difference is traceless Hermitian with diagonal gap `a` and
/// off-diagonal `d`, so its eigenvalues are `±√(a² + |d|²)`.
pub fn trace_distance(rho1: &QubitState, rho2: &QubitState) -> f64 {
    let gap = rho1.p_plus() - rho2.p_plus();
    let off = rho1.coherence() - rho2.coherence();
    gap.hypot(off.norm()).min(1.0)
}

/// `Tr ρ²`.
pub fn purity(rho: &QubitState) -> f64 {
    1.0 - linear_entropy(rho)
}

/// `1 - Tr ρ² = 2[p(1-p) - |c|²]`.
pub fn linear_entropy(rho: &QubitState) -> f64 {
    let p = rho.p_plus();
    2.0 * (p * (1.0 - p) - rho.coherence().norm_sqr())
}

fn entropy_from_factor(init: &InitState, abs_factor_sq: f64) -> f64 {
    let pp = init.p_plus();
    let pm = init.b_minus().norm_sqr();
    1.0 - (pp * pp + pm * pm + 2.0 * pp * pm * abs_factor_sq)
}

/// Linear entropy of the correlated-start trajectory from `|A_λ(t)|`.
pub fn entropy_correlated(env: &EnvSpec, init: &InitState, t: f64) -> Result<f64> {
    let a = decoherence_factor(env, init, t)?.value;
    Ok(entropy_from_factor(init, a.norm_sqr()))
}

/// Linear entropy of the product-start trajectory from `|A_λ(0) A_0(t)|`.
pub fn entropy_product(env: &EnvSpec, init: &InitState, t: f64) -> Result<f64> {
    let a = product_factor(env, init, t)?;
    Ok(entropy_from_factor(init, a.norm_sqr()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rho_correlated, rho_product};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn state(p: f64, re: f64, im: f64) -> QubitState {
        QubitState::new(p, Complex64::new(re, im)).unwrap()
    }

    #[test]
    fn distance_basics() {
        let rho = state(0.3, 0.1, 0.2);
        assert_eq!(trace_distance(&rho, &rho), 0.0);
        assert_eq!(
            trace_distance(&state(1.0, 0.0, 0.0), &state(0.0, 0.0, 0.0)),
            1.0
        );
        let c1 = Complex64::new(0.2, 0.1);
        let c2 = Complex64::new(-0.3, 0.25);
        let d = trace_distance(&state(0.5, c1.re, c1.im), &state(0.5, c2.re, c2.im));
        assert_relative_eq!(d, (c1 - c2).norm(), max_relative = 1e-15);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(linear_entropy(&state(1.0, 0.0, 0.0)), 0.0);
        assert_eq!(linear_entropy(&state(0.5, 0.0, 0.0)), 0.5);
        assert_relative_eq!(
            linear_entropy(&state(0.5, 0.0, 0.25)),
            0.375,
            max_relative = 1e-15
        );
        assert_relative_eq!(purity(&state(0.5, 0.0, 0.25)), 0.625, max_relative = 1e-15);
    }

    #[test]
    fn closed_form_entropies_match_states() {
        let env = EnvSpec::dimensionless(0.01, 0.01, 0.05, 0.2).unwrap();
        let init = InitState::from_population(0.4, 0.7, 1.0).unwrap();
        for t in [0.0, 0.5, 3.0, 40.0] {
            let sc = entropy_correlated(&env, &init, t).unwrap();
            let sp = entropy_product(&env, &init, t).unwrap();
            let rc = rho_correlated(&env, &init, t).unwrap();
            let rp = rho_product(&env, &init, t).unwrap();
            assert!((sc - linear_entropy(&rc)).abs() <= 1e-12);
            assert!((sp - linear_entropy(&rp)).abs() <= 1e-12);
        }
        assert_eq!(
            entropy_correlated(&env, &init, 0.0).unwrap(),
            entropy_product(&env, &init, 0.0).unwrap()
        );
    }

    #[test]
    fn product_entropy_dominates_at_reference_point() {
        let env = EnvSpec::dimensionless(0.01, 0.01, 0.05, 0.2).unwrap();
        let init = InitState::from_population(0.5, 1.0, 1.0).unwrap();
        let sc = entropy_correlated(&env, &init, 10.0).unwrap();
        let sp = entropy_product(&env, &init, 10.0).unwrap();
        assert!(sp > sc);
    }

    #[test]
    fn correlation_phase_can_reverse_entropy_order() {
        // Strong coupling, λ < 1: the phase 2Φ(t) makes |1 - λ + λe^(s-2iΦ)| drop
        // below 1 - λ + λe^(s(0)) even though s(t) ≥ s(0).
        let env = EnvSpec::dimensionless(10.0, 0.2, 0.77, 0.2).unwrap();
        let init = InitState::from_population(0.5, 0.5, 1.0).unwrap();
        let sc = entropy_correlated(&env, &init, 0.15).unwrap();
        let sp = entropy_product(&env, &init, 0.15).unwrap();
        assert!(sp - sc < -1e-3, "{}", sp - sc);
    }
}
