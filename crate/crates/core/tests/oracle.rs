//! Closed forms checked against the quadrature oracle and against values
//! frozen from high-precision evaluation of the defining integrals.

use approx::assert_relative_eq;
use dephase_core::model::product_factor;
use dephase_core::quadrature::{integrate_power_law, Weight};
use dephase_core::verify::{certify, default_points, Tolerance};
use dephase_core::*;

const GAMMA_0_2: f64 = 4.590_843_711_998_803;
const GAMMA_0_01: f64 = 99.432_585_119_150_6;
const VACUUM_OVERLAP_REF: f64 = 0.891_570_207_389_943_8;
const R_AT_10_REF: f64 = 0.091_148_408_956_597_12;

fn reference_env() -> EnvSpec {
    EnvSpec::dimensionless(0.01, 0.01, 0.05, 0.2).unwrap()
}

fn quad() -> QuadSpec {
    QuadSpec::default()
}

#[test]
fn euler_integral_oracle_freezes_gamma() {
    let q = quad();
    let oracle = integrate_power_law(0.2, Weight::Unity, 0.0, 1.0, &q).unwrap();
    assert_relative_eq!(oracle.value, GAMMA_0_2, max_relative = 1e-10);
    assert_relative_eq!(gamma_fn(0.2).unwrap(), GAMMA_0_2, max_relative = 1e-13);
    let oracle = integrate_power_law(0.01, Weight::Unity, 0.0, 1.0, &q).unwrap();
    assert_relative_eq!(oracle.value, GAMMA_0_01, max_relative = 1e-10);
    assert_relative_eq!(gamma_fn(0.01).unwrap(), GAMMA_0_01, max_relative = 1e-13);
}

#[test]
fn long_time_kernel_values() {
    assert_relative_eq!(
        0.01 * gamma_fn(0.01).unwrap(),
        0.994_325_851_191_506,
        max_relative = 1e-12
    );
    let lim = kernels_limit(&reference_env()).unwrap();
    assert_relative_eq!(lim.r, 3.977_303_404_766_024, max_relative = 1e-12);
    assert_eq!(lim.phi, 0.0);
}

#[test]
fn vacuum_overlap_value() {
    let env = reference_env();
    assert_relative_eq!(
        vacuum_overlap(&env).unwrap(),
        VACUUM_OVERLAP_REF,
        max_relative = 1e-13
    );
    let none = EnvSpec::dimensionless(0.01, 0.01, 0.0, 0.2).unwrap();
    assert_eq!(vacuum_overlap(&none).unwrap(), 1.0);
}

#[test]
fn kernel_l_agrees_with_oracle_hand_value() {
    let env = EnvSpec::dimensionless(0.01, 1.0, 0.05, 0.2).unwrap();
    let r = integrate_r(&env, 1.0, &quad()).unwrap().value;
    assert_relative_eq!(
        r,
        4.0 * kernel_l(0.01, 1.0, 1.0, 1.0).unwrap(),
        max_relative = 1e-10
    );
    assert_relative_eq!(r, 0.02, max_relative = 1e-10);
}

#[test]
fn reference_kernels_at_t10() {
    let env = reference_env();
    let q = quad();
    let k = kernels_at(&env, 10.0).unwrap();
    assert_relative_eq!(k.r, R_AT_10_REF, max_relative = 1e-12);
    assert_relative_eq!(
        k.r,
        integrate_r(&env, 10.0, &q).unwrap().value,
        max_relative = 1e-8
    );
    assert_relative_eq!(
        k.s,
        integrate_s(&env, 10.0, &q).unwrap().value,
        max_relative = 1e-8
    );
    assert_relative_eq!(
        k.phi,
        integrate_phi(&env, 10.0, &q).unwrap().value,
        max_relative = 1e-8
    );
}

#[test]
fn oracle_initial_s() {
    let env = reference_env();
    let s0 = integrate_s(&env, 0.0, &quad()).unwrap().value;
    assert_relative_eq!(s0, -0.5 * 0.05 * GAMMA_0_2, max_relative = 1e-10);
}

#[test]
fn fully_correlated_factor_magnitude_uses_oracle_kernels() {
    let env = reference_env();
    let q = quad();
    let init = InitState::from_population(0.5, 1.0, 1.0).unwrap();
    let a = decoherence_factor(&env, &init, 10.0).unwrap().value.norm();
    let r = integrate_r(&env, 10.0, &q).unwrap().value;
    let s = integrate_s(&env, 10.0, &q).unwrap().value;
    assert_relative_eq!(a, (s - r).exp(), max_relative = 1e-8);
}

#[test]
fn product_coherence_uses_oracle_decay() {
    let env = reference_env();
    let init = InitState::from_population(0.5, 0.75, 1.0).unwrap();
    let r5 = integrate_r(&env, 5.0, &quad()).unwrap().value;
    let a0 = decoherence_factor(&env, &init, 0.0).unwrap().value.re;
    let coh = rho_product(&env, &init, 5.0).unwrap().coherence().norm();
    assert_relative_eq!(coh, 0.5 * a0 * (-r5).exp(), max_relative = 1e-8);
    assert_relative_eq!(
        product_factor(&env, &init, 5.0).unwrap().norm(),
        a0 * (-r5).exp(),
        max_relative = 1e-8
    );
}

#[test]
fn reference_correlated_state_is_physical_at_t10() {
    let env = reference_env();
    let init = InitState::from_population(0.5, 1.0, 1.0).unwrap();
    let rho = rho_correlated(&env, &init, 10.0).unwrap();
    assert!(rho.coherence().norm_sqr() <= rho.p_plus() * (1.0 - rho.p_plus()) + 1e-12);
    assert!(rho.coherence().norm() <= 0.5);
}

#[test]
fn sub_ohmic_point_is_certified() {
    let env = EnvSpec::dimensionless(0.01, -0.5, 0.05, 0.2).unwrap();
    let points: Vec<_> = [0.1, 1.0, 10.0, 100.0].iter().map(|&t| (env, t)).collect();
    let report = certify(&points, &quad(), &Tolerance::default()).unwrap();
    for c in &report {
        assert!(c.passed, "{:?}", c);
    }
}

#[test]
fn default_grid_has_enough_points() {
    let pts = default_points();
    assert!(pts.len() >= 200);
    assert!(pts.iter().any(|(e, _)| e.mu() == -0.5));
    assert!(pts.iter().all(|(_, t)| (0.0..=100.0).contains(t)));
}
