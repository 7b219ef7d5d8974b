//! Adaptive quadrature oracle for the semi-infinite spectral integrals.
//!
//! Every kernel reduces to
//!
//! ```text
//! I(m, W, t) = ∫₀^∞ ω^(m-1) e^(-ω/ω_c) W(ωt) dω,   W ∈ {1 - cos, sin, 1}
//! ```
//!
//! which is evaluated by globally adaptive Gauss–Kronrod (7/15) on
//! `[0, ω_max]` plus an analytic bound on the exponential tail. Near the
//! origin the integrand behaves as `ω^(β-1)` with `β = m + deg W`; the
//! substitution `ω = ω_s u^(1/β)` on `[0, ω_s]` turns that into a bounded,
//! smooth integrand in `u`. This path shares nothing with the closed forms
//! in [`crate::specfun`] except the parameter struct.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{DephaseError, Result};
use crate::specfun::EnvSpec;

/// Tolerances and subdivision budget for the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
        }
    }
}

impl QuadSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let q = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(DephaseError::InvalidParameter {
                name: "rel_tol",
                value: self.rel_tol,
                constraint: "must be > 0",
            });
        }
        if !(self.abs_tol > 0.0) {
            return Err(DephaseError::InvalidParameter {
                name: "abs_tol",
                value: self.abs_tol,
                constraint: "must be > 0",
            });
        }
        if self.max_subdivisions < 1 {
            return Err(DephaseError::InvalidParameter {
                name: "max_subdivisions",
                value: self.max_subdivisions as f64,
                constraint: "must be >= 1",
            });
        }
        Ok(())
    }
}

/// A quadrature result together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

impl Estimate {
    fn zero() -> Self {
        Self {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        }
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            value: factor * self.value,
            error: factor.abs() * self.error,
            subdivisions: self.subdivisions,
        }
    }
}

/// The oscillatory factor `W(ωt)` of a spectral integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    OneMinusCos,
    Sine,
    Unity,
}

impl Weight {
    /// Power of ω with which `W(ωt)` vanishes at the origin.
    fn degree(self) -> f64 {
        match self {
            Weight::OneMinusCos => 2.0,
            Weight::Sine => 1.0,
            Weight::Unity => 0.0,
        }
    }

    fn bound(self) -> f64 {
        match self {
            Weight::OneMinusCos => 2.0,
            Weight::Sine | Weight::Unity => 1.0,
        }
    }

    fn eval(self, w: f64, t: f64) -> f64 {
        match self {
            Weight::OneMinusCos => {
                let h = (0.5 * w * t).sin();
                2.0 * h * h
            }
            Weight::Sine => (w * t).sin(),
            Weight::Unity => 1.0,
        }
    }

    /// `W(ωt) / ω^deg`, finite as ω → 0.
    fn eval_reduced(self, w: f64, t: f64) -> f64 {
        match self {
            Weight::OneMinusCos => {
                if w == 0.0 {
                    0.5 * t * t
                } else {
                    let h = (0.5 * w * t).sin() / w;
                    2.0 * h * h
                }
            }
            Weight::Sine => {
                if w == 0.0 {
                    t
                } else {
                    (w * t).sin() / w
                }
            }
            Weight::Unity => 1.0,
        }
    }
}

/// `4 ∫ g_h²(ω) [1 - cos ωt] dω`.
pub fn integrate_r(env: &EnvSpec, t: f64, q: &QuadSpec) -> Result<Estimate> {
    if env.alpha() == 0.0 {
        return Ok(Estimate::zero());
    }
    let unit = integrate_power_law(env.mu(), Weight::OneMinusCos, t, env.omega_c(), q)?;
    Ok(unit.scaled(4.0 * env.alpha()))
}

/// `2 ∫ g_h f [1 - cos ωt] dω - (1/2) ∫ f² dω`.
pub fn integrate_s(env: &EnvSpec, t: f64, q: &QuadSpec) -> Result<Estimate> {
    if env.gamma() == 0.0 {
        return Ok(Estimate::zero());
    }
    let cross = if env.alpha() == 0.0 {
        Estimate::zero()
    } else {
        integrate_power_law(env.kappa(), Weight::OneMinusCos, t, env.omega_c(), q)?
            .scaled(2.0 * env.cross_amplitude())
    };
    let norm = integrate_power_law(env.nu(), Weight::Unity, 0.0, env.omega_c(), q)?
        .scaled(0.5 * env.gamma());
    Ok(Estimate {
        value: cross.value - norm.value,
        error: cross.error + norm.error,
        subdivisions: cross.subdivisions + norm.subdivisions,
    })
}

/// `∫ g_h f sin(ωt) dω`.
pub fn integrate_phi(env: &EnvSpec, t: f64, q: &QuadSpec) -> Result<Estimate> {
    if env.cross_amplitude() == 0.0 {
        return Ok(Estimate::zero());
    }
    let unit = integrate_power_law(env.kappa(), Weight::Sine, t, env.omega_c(), q)?;
    Ok(unit.scaled(env.cross_amplitude()))
}

/// `∫₀^∞ ω^(m-1) e^(-ω/ω_c) W(ωt) dω` to the tolerances in `q`.
///
/// With `W = Unity` this is the Euler integral `Γ(m)·ω_c^m`.
pub fn integrate_power_law(
    m: f64,
    weight: Weight,
    t: f64,
    omega_c: f64,
    q: &QuadSpec,
) -> Result<Estimate> {
    q.validate()?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(DephaseError::InvalidParameter {
            name: "t",
            value: t,
            constraint: "time must be finite and >= 0",
        });
    }
    if !(omega_c > 0.0) {
        return Err(DephaseError::InvalidParameter {
            name: "omega_c",
            value: omega_c,
            constraint: "must be > 0",
        });
    }
    let beta = m + weight.degree();
    if !(beta > 0.0) || !m.is_finite() {
        return Err(DephaseError::Domain {
            function: "integrate_power_law",
            value: m,
            reason: "integrand is not integrable at the origin",
        });
    }
    if t == 0.0 && weight != Weight::Unity {
        return Ok(Estimate::zero());
    }

    let integrand = PowerLaw {
        m,
        beta,
        weight,
        t,
        omega_c,
        split: if weight == Weight::Unity {
            omega_c
        } else {
            omega_c.min(1.0 / t)
        },
    };
    let (upper, tail) = integrand.truncation(q.abs_tol);
    adaptive(&integrand, upper, tail, q)
}

struct PowerLaw {
    m: f64,
    beta: f64,
    weight: Weight,
    t: f64,
    omega_c: f64,
    split: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Segment {
    /// `u ∈ [0, 1]` with `ω = split·u^(1/β)`.
    Origin,
    /// Plain ω on `[split, ω_max]`.
    Bulk,
}

impl PowerLaw {
    fn eval(&self, segment: Segment, x: f64) -> f64 {
        match segment {
            Segment::Origin => {
                let w = self.split * x.powf(1.0 / self.beta);
                self.split.powf(self.beta) / self.beta
                    * (-w / self.omega_c).exp()
                    * self.weight.eval_reduced(w, self.t)
            }
            Segment::Bulk => {
                x.powf(self.m - 1.0) * (-x / self.omega_c).exp() * self.weight.eval(x, self.t)
            }
        }
    }

    /// Upper integration limit and a rigorous bound on the discarded tail.
    fn truncation(&self, abs_tol: f64) -> (f64, f64) {
        let mut y = (8.0 + (1.0 / abs_tol).ln().max(0.0)).max(2.0 * self.split / self.omega_c);
        loop {
            // ∫_y^∞ x^(m-1) e^(-x) dx ≤ y^(m-1) e^(-y) / (1 - (m-1)/y) for y > m - 1
            let shape = if self.m > 1.0 {
                1.0 / (1.0 - (self.m - 1.0) / y)
            } else {
                1.0
            };
            let tail = self.weight.bound()
                * self.omega_c.powf(self.m)
                * y.powf(self.m - 1.0)
                * (-y).exp()
                * shape;
            if y > 2.0 * (self.m - 1.0).max(0.0) && tail <= 1e-3 * abs_tol {
                return (y * self.omega_c, tail);
            }
            y *= 1.5;
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Interval {
    a: f64,
    b: f64,
    segment: Segment,
    value: f64,
    error: f64,
    l1: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod(f: &PowerLaw, segment: Segment, a: f64, b: f64) -> Interval {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f.eval(segment, center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f.eval(segment, center - dx);
        let f2 = f.eval(segment, center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Interval {
        a,
        b,
        segment,
        value,
        error,
        l1: res_abs,
    }
}

fn adaptive(f: &PowerLaw, upper: f64, tail: f64, q: &QuadSpec) -> Result<Estimate> {
    let mut heap = BinaryHeap::new();
    heap.push(kronrod(f, Segment::Origin, 0.0, 1.0));

    // One bulk interval per oscillation period, within half the budget.
    let bulk_len = upper - f.split;
    let periods = if f.weight == Weight::Unity {
        1
    } else {
        (bulk_len * f.t / (2.0 * PI)).ceil().max(1.0) as usize
    };
    let initial = periods.min((q.max_subdivisions / 2).max(1));
    let step = bulk_len / initial as f64;
    for i in 0..initial {
        let a = f.split + step * i as f64;
        let b = if i + 1 == initial { upper } else { a + step };
        heap.push(kronrod(f, Segment::Bulk, a, b));
    }

    let total = |heap: &BinaryHeap<Interval>| -> (f64, f64, f64) {
        heap.iter().fold((0.0, tail, 0.0), |(v, e, l), iv| {
            (v + iv.value, e + iv.error, l + iv.l1)
        })
    };
    // No tolerance below the roundoff level of ∫|f| is attainable.
    let target = |value: f64, l1: f64| {
        q.abs_tol
            .max(q.rel_tol * value.abs())
            .max(100.0 * f64::EPSILON * l1)
    };

    let (mut value, mut error, mut l1) = total(&heap);
    let mut subdivisions = heap.len();
    while error > target(value, l1) {
        if subdivisions >= q.max_subdivisions {
            return Err(DephaseError::Convergence {
                value,
                achieved: error,
                requested: target(value, l1),
                subdivisions,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval can no longer be split in floating point
            return Err(DephaseError::Convergence {
                value,
                achieved: error,
                requested: target(value, l1),
                subdivisions,
            });
        }
        let left = kronrod(f, worst.segment, worst.a, mid);
        let right = kronrod(f, worst.segment, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
        if subdivisions % 64 == 0 {
            (value, error, l1) = total(&heap);
        }
    }
    let (value, error, _) = total(&heap);
    Ok(Estimate {
        value,
        error,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_env() -> EnvSpec {
        EnvSpec::dimensionless(0.01, 0.01, 0.05, 0.2).unwrap()
    }

    #[test]
    fn euler_integral_matches_known_gamma_values() {
        let q = QuadSpec::default();
        let g = |x: f64| {
            integrate_power_law(x, Weight::Unity, 0.0, 1.0, &q)
                .unwrap()
                .value
        };
        assert_relative_eq!(g(1.0), 1.0, max_relative = 1e-11);
        assert_relative_eq!(g(0.5), PI.sqrt(), max_relative = 1e-11);
        assert_relative_eq!(g(4.0), 6.0, max_relative = 1e-11);
    }

    #[test]
    fn zero_time_is_exactly_zero() {
        let q = QuadSpec::default();
        let env = reference_env();
        assert_eq!(integrate_r(&env, 0.0, &q).unwrap().value, 0.0);
        assert_eq!(integrate_phi(&env, 0.0, &q).unwrap().value, 0.0);
        let s0 = integrate_s(&env, 0.0, &q).unwrap().value;
        let expected = -0.5
            * 0.05
            * integrate_power_law(0.2, Weight::Unity, 0.0, 1.0, &q)
                .unwrap()
                .value;
        assert_eq!(s0, expected);
    }

    #[test]
    fn ohmic_unit_hand_value() {
        // 4·0.01·∫ e^(-ω)(1 - cos ω) dω = 0.04·(1 - 1/2)
        let env = EnvSpec::dimensionless(0.01, 1.0, 0.05, 0.2).unwrap();
        let r = integrate_r(&env, 1.0, &QuadSpec::default()).unwrap();
        assert_relative_eq!(r.value, 0.02, max_relative = 1e-10);
    }

    #[test]
    fn gamma_zero_kills_cross_terms() {
        let env = EnvSpec::dimensionless(0.01, 0.5, 0.0, 0.2).unwrap();
        let q = QuadSpec::default();
        assert_eq!(integrate_s(&env, 3.0, &q).unwrap().value, 0.0);
        assert_eq!(integrate_phi(&env, 3.0, &q).unwrap().value, 0.0);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let q = QuadSpec::new(1e-15, 1e-300, 3).unwrap();
        let err = integrate_power_law(0.3, Weight::Sine, 80.0, 1.0, &q).unwrap_err();
        assert!(matches!(err, DephaseError::Convergence { .. }));
    }

    #[test]
    fn rejects_bad_spec_and_domain() {
        assert!(QuadSpec::new(0.0, 1e-14, 10).is_err());
        assert!(QuadSpec::new(1e-8, -1.0, 10).is_err());
        assert!(QuadSpec::new(1e-8, 1e-14, 0).is_err());
        let q = QuadSpec::default();
        assert!(integrate_power_law(-0.1, Weight::Unity, 0.0, 1.0, &q).is_err());
        assert!(integrate_power_law(0.5, Weight::Sine, -1.0, 1.0, &q).is_err());
    }

    #[test]
    fn tightening_tolerance_stays_within_previous_error() {
        let env = reference_env();
        for t in [0.5, 10.0, 75.0] {
            let mut prev: Option<Estimate> = None;
            let mut rel = 1e-6;
            while rel >= 1e-11 {
                let q = QuadSpec::new(rel, 1e-15, 20_000).unwrap();
                let cur = integrate_s(&env, t, &q).unwrap();
                if let Some(p) = prev {
                    assert!(
                        (cur.value - p.value).abs() <= p.error,
                        "t={t} rel={rel}: {} vs {} (err {})",
                        cur.value,
                        p.value,
                        p.error
                    );
                }
                prev = Some(cur);
                rel /= 2.0;
            }
        }
    }

    #[test]
    fn large_time_oracle_converges_or_reports() {
        use crate::specfun::kernels_at;
        let env = reference_env();
        for (t, budget) in [(60.0, 2000), (300.0, 2000), (1000.0, 300), (1000.0, 20_000)] {
            let q = QuadSpec::new(1e-10, 1e-14, budget).unwrap();
            let closed = kernels_at(&env, t).unwrap().phi;
            match integrate_phi(&env, t, &q) {
                Ok(est) => assert!(
                    (est.value - closed).abs() <= (10.0 * est.error).max(1e-12),
                    "t={t}: {} vs {} (err {})",
                    est.value,
                    closed,
                    est.error
                ),
                Err(e) => assert!(matches!(e, DephaseError::Convergence { .. }), "{e}"),
            }
        }
    }
}
