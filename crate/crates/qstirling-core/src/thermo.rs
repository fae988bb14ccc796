//! Equilibrium thermodynamics of the working medium.
//!
//! Two representations are supported:
//!
//! - the closed-form *gapped tower* ([`EffectiveSpectrum`]): a harmonic
//!   ladder of spacing `gap` whose every rung carries the ground-level
//!   degeneracy d — partition function Z = d/(1 − e^(−gap/T));
//! - an explicit, finite list of exact energy levels
//!   ([`spectrum_thermo`]), used by the numerically exact cycle mode.
//!
//! All tower quantities are expressed through x = gap/T. Internal energies
//! carry a large, temperature-independent offset (the ground energy contains
//! −γ, which at typical working points is ~10² while heats can be ~10⁻¹²),
//! so every struct exposes both the absolute energy and the thermal part
//! measured from the ground level; consumers that difference energies at
//! fixed spectrum must use the thermal part to avoid catastrophic
//! cancellation.

use crate::error::{require_positive, Error, Result};
use crate::medium::EffectiveSpectrum;

/// Below this x, the heat capacity uses its Taylor series 1 − x²/12 to avoid
/// the 0/0 of the closed form.
const HEAT_CAPACITY_SERIES_X: f64 = 1e-6;

/// Above this x, sinh(x/2)² would overflow; the heat capacity switches to its
/// x²e^(−x) tail (which itself underflows to 0 near x ≈ 1430).
const HEAT_CAPACITY_TAIL_X: f64 = 700.0;

/// Default absolute quadrature tolerance per unit of integration interval.
pub const QUADRATURE_TOL_PER_UNIT: f64 = 1e-10;

/// Default maximum recursion depth of the adaptive quadrature.
pub const QUADRATURE_MAX_DEPTH: u32 = 40;

/// ln(1 − e^(−x)) for x > 0, accurate over the whole range.
///
/// Uses ln1p(−e^(−x)) for x > ln 2 (where e^(−x) < 1/2 and the log1p form
/// keeps relative accuracy) and ln(−expm1(−x)) otherwise (where 1 − e^(−x)
/// suffers cancellation but expm1 does not).
pub fn ln_one_minus_exp_neg(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x > std::f64::consts::LN_2 {
        (-(-x).exp()).ln_1p()
    } else {
        (-(-x).exp_m1()).ln()
    }
}

/// Dimensionless heat capacity of a gapped harmonic tower as a function of
/// x = gap/T:  C(x) = (x/2)² / sinh²(x/2).
///
/// C → 1 as x → 0 (classical equipartition), C → x²e^(−x) as x → ∞
/// (exponential freeze-out). Degeneracy does not enter: a constant ln d in
/// the entropy carries no heat.
pub fn heat_capacity(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("x = gap/T must be > 0, got {x}")));
    }
    if x < HEAT_CAPACITY_SERIES_X {
        Ok(1.0 - x * x / 12.0)
    } else if x > HEAT_CAPACITY_TAIL_X {
        Ok(x * x * (-x).exp())
    } else {
        let h = 0.5 * x;
        let r = h / h.sinh();
        Ok(r * r)
    }
}

/// Thermodynamic state of a gapped tower at one temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TowerThermo {
    /// x = gap/T.
    pub x: f64,
    /// Partition function with energies measured from the ground level:
    /// Z = d/(1 − e^(−x)).
    pub z: f64,
    /// Thermal part of the internal energy, gap/(e^x − 1), measured from the
    /// ground level. Use this for differences at fixed spectrum.
    pub u_thermal: f64,
    /// Absolute internal energy, ground_energy + u_thermal.
    pub u: f64,
    /// Entropy x/(e^x − 1) − ln(1 − e^(−x)) + ln d.
    pub s: f64,
    /// Dimensionless heat capacity C(x).
    pub c: f64,
}

/// Evaluates the gapped-tower thermodynamics at temperature `t` > 0.
pub fn tower_thermo(spectrum: &EffectiveSpectrum, t: f64) -> Result<TowerThermo> {
    require_positive("temperature", t)?;
    let gap = spectrum.gap;
    let d = f64::from(spectrum.degeneracy);
    let x = gap / t;
    // 1/(e^x − 1); expm1 overflows to +inf for x ≳ 709, making n̄ a clean 0.
    let n_bar = 1.0 / x.exp_m1();
    let u_thermal = gap * n_bar;
    let s = x * n_bar - ln_one_minus_exp_neg(x) + d.ln();
    let z = d / (-(-x).exp_m1());
    Ok(TowerThermo {
        x,
        z,
        u_thermal,
        u: spectrum.ground_energy + u_thermal,
        s,
        c: heat_capacity(x)?,
    })
}

/// Heat absorbed by the tower when its temperature moves from `t1` to `t2`
/// at fixed spectrum: ∫ C(gap/T) dT, by adaptive quadrature.
///
/// Equals U(t2) − U(t1) up to the quadrature tolerance
/// ([`QUADRATURE_TOL_PER_UNIT`] per unit interval, depth ≤ [`QUADRATURE_MAX_DEPTH`]).
pub fn isochoric_heat(spectrum: &EffectiveSpectrum, t1: f64, t2: f64) -> Result<f64> {
    require_positive("t1", t1)?;
    require_positive("t2", t2)?;
    let gap = spectrum.gap;
    integrate(
        &|t| heat_capacity(gap / t).expect("x > 0 on a positive interval"),
        t1,
        t2,
    )
}

/// Entropy change of the tower between `t1` and `t2` at fixed spectrum:
/// ∫ C(gap/T)/T dT, by adaptive quadrature. Equals S(t2) − S(t1).
pub fn isochoric_entropy_change(spectrum: &EffectiveSpectrum, t1: f64, t2: f64) -> Result<f64> {
    require_positive("t1", t1)?;
    require_positive("t2", t2)?;
    let gap = spectrum.gap;
    integrate(
        &|t| heat_capacity(gap / t).expect("x > 0 on a positive interval") / t,
        t1,
        t2,
    )
}

fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let tol = QUADRATURE_TOL_PER_UNIT * (b - a).abs();
    adaptive_simpson(f, a, b, tol, QUADRATURE_MAX_DEPTH)
}

/// Adaptive Simpson quadrature with Richardson extrapolation.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration bounds must be finite"));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::domain(format!(
            "quadrature tolerance must be > 0, got {tol}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let flo = f(lo);
    let fhi = f(hi);
    let m = 0.5 * (lo + hi);
    let fm = f(m);
    let whole = simpson_rule(lo, hi, flo, fm, fhi);
    let value = simpson_recurse(f, lo, m, hi, flo, fm, fhi, whole, tol, max_depth)?;
    Ok(sign * value)
}

fn simpson_rule(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    m: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_rule(a, m, fa, flm, fm);
    let right = simpson_rule(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDepth {
            max_depth: QUADRATURE_MAX_DEPTH,
        });
    }
    let half_tol = 0.5 * tol;
    let l = simpson_recurse(f, a, lm, m, fa, flm, fm, left, half_tol, depth - 1)?;
    let r = simpson_recurse(f, m, rm, b, fm, frm, fb, right, half_tol, depth - 1)?;
    Ok(l + r)
}

/// Gibbs thermodynamics over an explicit, finite list of energy levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumThermo {
    /// Lowest level; all Boltzmann weights are taken relative to it.
    pub e_min: f64,
    /// Partition function with energies measured from `e_min`.
    pub z_shifted: f64,
    /// Internal energy measured from `e_min`. Use this for differences at
    /// fixed spectrum.
    pub u_above_ground: f64,
    /// Absolute internal energy, e_min + u_above_ground.
    pub u: f64,
    /// Entropy u_above_ground/T + ln z_shifted (reference-independent).
    pub s: f64,
    /// Heat capacity from the energy variance, Var(E)/T².
    pub c: f64,
}

/// Evaluates Gibbs thermodynamics for `levels` (finite, non-decreasing,
/// non-empty) at temperature `t` > 0.
///
/// Truncation of the level list is the caller's responsibility: the list
/// must extend far enough above `e_min` that e^(−(E_max − e_min)/T) is
/// negligible at the requested accuracy.
pub fn spectrum_thermo(levels: &[f64], t: f64) -> Result<SpectrumThermo> {
    require_positive("temperature", t)?;
    if levels.is_empty() {
        return Err(Error::domain("level list must be non-empty"));
    }
    for pair in levels.windows(2) {
        if !(pair[0].is_finite() && pair[1].is_finite()) {
            return Err(Error::domain("levels must be finite"));
        }
        if pair[1] < pair[0] {
            return Err(Error::domain(
                "levels must be sorted in non-decreasing order",
            ));
        }
    }
    if !levels[0].is_finite() {
        return Err(Error::domain("levels must be finite"));
    }
    let e_min = levels[0];
    let mut z = 0.0;
    let mut first = 0.0;
    let mut second = 0.0;
    for &e in levels {
        let de = e - e_min;
        let w = (-de / t).exp();
        z += w;
        first += de * w;
        second += de * de * w;
    }
    let u_above = first / z;
    let var = second / z - u_above * u_above;
    Ok(SpectrumThermo {
        e_min,
        z_shifted: z,
        u_above_ground: u_above,
        u: e_min + u_above,
        s: u_above / t + z.ln(),
        c: var / (t * t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::{effective_spectrum_for_g, DEFAULT_CRITICAL_TOL};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn tower(g: f64, omega0: f64, gamma: f64) -> EffectiveSpectrum {
        effective_spectrum_for_g(g, omega0, gamma, DEFAULT_CRITICAL_TOL).unwrap()
    }

    #[test]
    fn heat_capacity_closed_form_value() {
        // C(2) = 1/sinh²(1) = csch²(1).
        let c = heat_capacity(2.0).unwrap();
        assert_relative_eq!(c, 0.724_061_660_966_310_5, max_relative = 1e-14);
    }

    #[test]
    fn heat_capacity_series_matches_closed_form_at_crossover() {
        // Series and closed form agree through the switch at x = 1e-6.
        for x in [5e-7, 9.9e-7, 1.01e-6, 2e-6] {
            let series = 1.0 - x * x / 12.0;
            let c = heat_capacity(x).unwrap();
            assert_relative_eq!(c, series, max_relative = 1e-12, epsilon = 0.0);
        }
        assert_relative_eq!(heat_capacity(1e-9).unwrap(), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn heat_capacity_tail_is_finite_then_zero() {
        // Just across the tail switch the two branches agree.
        let below = heat_capacity(699.9).unwrap();
        let above = heat_capacity(700.1).unwrap();
        assert!(below > 0.0 && above > 0.0);
        assert_relative_eq!(
            below / above,
            (0.2f64).exp() * (699.9f64 / 700.1).powi(2),
            max_relative = 1e-10
        );
        // Deep tail underflows cleanly to zero rather than NaN.
        assert_eq!(heat_capacity(2000.0).unwrap(), 0.0);
    }

    #[test]
    fn heat_capacity_rejects_non_positive_x() {
        assert!(heat_capacity(0.0).is_err());
        assert!(heat_capacity(-1.0).is_err());
        assert!(heat_capacity(f64::NAN).is_err());
    }

    #[test]
    fn tower_entropy_at_x_ln2() {
        // x = ln 2: n̄ = 1, S = ln 2 − ln(1/2) = 2 ln 2 (d = 1).
        let spec = tower(0.6, 1.0, 5.0);
        let t = spec.gap / std::f64::consts::LN_2;
        let th = tower_thermo(&spec, t).unwrap();
        assert_relative_eq!(th.s, 1.386_294_361_119_890_6, max_relative = 1e-14);
        assert_relative_eq!(th.u_thermal, spec.gap, max_relative = 1e-14);
        assert_relative_eq!(th.z, 2.0, max_relative = 1e-14);
        assert_relative_eq!(th.u, spec.ground_energy + spec.gap, max_relative = 1e-14);
    }

    #[test]
    fn degeneracy_shifts_entropy_by_ln2_only() {
        let normal = tower(0.6, 1.0, 5.0);
        let mut degenerate = normal;
        degenerate.degeneracy = 2;
        let t = 0.37 * normal.gap;
        let a = tower_thermo(&normal, t).unwrap();
        let b = tower_thermo(&degenerate, t).unwrap();
        assert_relative_eq!(b.s - a.s, std::f64::consts::LN_2, max_relative = 1e-13);
        assert_eq!(a.u_thermal, b.u_thermal);
        assert_eq!(a.c, b.c);
        assert_relative_eq!(b.z, 2.0 * a.z, max_relative = 1e-15);
    }

    #[test]
    fn deep_freeze_is_clean() {
        // gap/T ~ 10⁵: every thermal quantity underflows to its T = 0 limit
        // without NaN or infinity.
        let spec = tower(0.6, 1.0, 5.0);
        let th = tower_thermo(&spec, spec.gap * 1e-5).unwrap();
        assert_eq!(th.u_thermal, 0.0);
        assert_eq!(th.u, spec.ground_energy);
        assert_eq!(th.s, 0.0);
        assert_eq!(th.c, 0.0);
        assert_eq!(th.z, 1.0);
    }

    #[test]
    fn ln_one_minus_exp_neg_branches_agree() {
        // Both branches are accurate near the split at ln 2; compare against
        // each other across it and against direct evaluation where safe.
        let ln2 = std::f64::consts::LN_2;
        for x in [0.5, 0.6, 0.69, ln2 - 1e-4, ln2 + 1e-4, 0.70, 0.8, 1.0] {
            let v = ln_one_minus_exp_neg(x);
            let direct = (1.0 - (-x).exp()).ln();
            assert_relative_eq!(v, direct, max_relative = 1e-12);
        }
        // Moderate x: direct evaluation is still accurate enough to compare.
        for x in [2.0, 5.0, 10.0, 20.0] {
            let v = ln_one_minus_exp_neg(x);
            let direct = (1.0 - (-x).exp()).ln();
            assert_relative_eq!(v, direct, max_relative = 1e-12);
        }
        // Large x: direct evaluation collapses to 0, but the log1p branch
        // tracks the asymptotic series −e^(−x) − e^(−2x)/2 to full accuracy.
        for x in [30.0, 40.0, 300.0] {
            let v = ln_one_minus_exp_neg(x);
            assert_relative_eq!(
                v,
                -(-x).exp() - 0.5 * (-2.0 * x).exp(),
                max_relative = 1e-12
            );
            assert!(v != 0.0);
        }
        // Tiny x: ln(x) dominates.
        assert_relative_eq!(
            ln_one_minus_exp_neg(1e-12),
            (1e-12f64).ln() - 0.5e-12,
            max_relative = 1e-13
        );
    }

    #[test]
    fn isochoric_heat_matches_energy_difference() {
        let spec = tower(0.8, 1.0, 200.0);
        let (t1, t2) = (0.3 * spec.gap, 4.0 * spec.gap);
        let q = isochoric_heat(&spec, t1, t2).unwrap();
        let du =
            tower_thermo(&spec, t2).unwrap().u_thermal - tower_thermo(&spec, t1).unwrap().u_thermal;
        assert_relative_eq!(q, du, max_relative = 1e-9);
        // Antisymmetry under swapping the endpoints.
        let q_rev = isochoric_heat(&spec, t2, t1).unwrap();
        assert_relative_eq!(q_rev, -q, max_relative = 1e-12);
        assert_eq!(isochoric_heat(&spec, t1, t1).unwrap(), 0.0);
    }

    #[test]
    fn isochoric_entropy_change_matches_entropy_difference() {
        let spec = tower(1.7, 1.0, 50.0);
        let (t1, t2) = (0.5 * spec.gap, 2.5 * spec.gap);
        let ds = isochoric_entropy_change(&spec, t1, t2).unwrap();
        let expect = tower_thermo(&spec, t2).unwrap().s - tower_thermo(&spec, t1).unwrap().s;
        assert_relative_eq!(ds, expect, max_relative = 1e-9);
    }

    #[test]
    fn quadrature_is_exact_on_cubics_and_respects_depth_cap() {
        // Simpson integrates cubics exactly.
        let v = adaptive_simpson(&|t| t * t * t - 2.0 * t + 1.0, -1.0, 3.0, 1e-12, 10).unwrap();
        assert_abs_diff_eq!(v, 20.0 - 8.0 + 4.0, epsilon = 1e-10);
        // A needle the sampler cannot resolve at depth 0 must error, not lie.
        let needle = |t: f64| (-((t - 0.5) * 4000.0).powi(2)).exp();
        let err = adaptive_simpson(&needle, 0.0, 1.0, 1e-14, 0).unwrap_err();
        assert!(matches!(err, Error::QuadratureDepth { .. }));
        // With normal depth it converges to √π/4000.
        let v = adaptive_simpson(&needle, 0.0, 1.0, 1e-14, 40).unwrap();
        assert_relative_eq!(v, std::f64::consts::PI.sqrt() / 4000.0, max_relative = 1e-7);
    }

    #[test]
    fn spectrum_thermo_reproduces_tower() {
        // An explicit doubly-degenerate ladder must match the closed-form
        // tower with d = 2.
        let spec = tower(1.5, 1.0, 80.0);
        let t = 0.9 * spec.gap;
        let k_max = 80; // e^(−80/0.9) is far below f64 resolution
        let mut levels = Vec::new();
        for k in 0..=k_max {
            let e = spec.ground_energy + f64::from(k) * spec.gap;
            levels.push(e);
            levels.push(e);
        }
        let exact = spectrum_thermo(&levels, t).unwrap();
        let closed = tower_thermo(&spec, t).unwrap();
        assert_relative_eq!(exact.u_above_ground, closed.u_thermal, max_relative = 1e-13);
        assert_relative_eq!(exact.s, closed.s, max_relative = 1e-13);
        assert_relative_eq!(exact.z_shifted, closed.z, max_relative = 1e-13);
        assert_relative_eq!(exact.c, closed.c, max_relative = 1e-11);
        assert_eq!(exact.e_min, spec.ground_energy);
    }

    #[test]
    fn spectrum_thermo_validates_input() {
        assert!(spectrum_thermo(&[], 1.0).is_err());
        assert!(spectrum_thermo(&[1.0, 0.5], 1.0).is_err());
        assert!(spectrum_thermo(&[0.0, f64::NAN], 1.0).is_err());
        assert!(spectrum_thermo(&[0.0, 1.0], 0.0).is_err());
        assert!(spectrum_thermo(&[0.0, 1.0], -2.0).is_err());
        // Equal levels (degeneracy) are allowed.
        assert!(spectrum_thermo(&[0.0, 0.0, 1.0], 1.0).is_ok());
    }

    #[test]
    fn entropy_is_monotone_in_temperature() {
        let spec = tower(0.4, 2.0, 900.0);
        let mut prev = f64::NEG_INFINITY;
        for i in 1..=40 {
            let t = spec.gap * 0.05 * f64::from(i);
            let s = tower_thermo(&spec, t).unwrap().s;
            assert!(s > prev, "entropy must increase with T (t = {t})");
            prev = s;
        }
    }
}
