//! Parameter sweeps over families of Stirling cycles, bundled presets, the
//! critical-scaling scan of the efficiency, and tabular (CSV) output.
//!
//! A sweep varies one axis quantity (the coupling ratio ξ of the g2
//! isochore, the inter-qubit coupling γ, or the distance of g2 from the
//! critical point) while stepping curve families over γ and/or the cold
//! temperature. Points where the g2 isochore would sit inside the critical
//! exclusion window are skipped and flagged rather than failing the sweep.
//!
//! Row evaluation is embarrassingly parallel; results are collected in a
//! fixed order so output bytes never depend on thread count.

use crate::cycle::{run_cycle, CycleResult, StirlingCycle};
use crate::error::{require_positive, Error, Result};
use crate::medium::{effective_spectrum_for_g, MediumParams, DEFAULT_CRITICAL_TOL};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::io;

/// The bundled sweep configurations. The names are stable identifiers used
/// on the command line and in the `figure` column of CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Efficiency vs coupling ratio ξ at four inter-qubit couplings
    /// (normal phase, deep quantum-frozen regime).
    Fig2,
    /// Efficiency vs inter-qubit coupling γ at four cold temperatures,
    /// fixed ξ.
    Fig3,
    /// Efficiency (relative to Carnot) vs ξ on the superradiant side at four
    /// cold temperatures.
    Fig4,
    /// Efficiency vs distance of g2 from the critical point, log-spaced.
    Scaling,
}

impl Preset {
    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Scaling => "scaling",
        }
    }

    /// Parses a preset name as used on the command line.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "fig2" => Some(Preset::Fig2),
            "fig3" => Some(Preset::Fig3),
            "fig4" => Some(Preset::Fig4),
            "scaling" => Some(Preset::Scaling),
            _ => None,
        }
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The quantity stepped along a sweep's axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// ξ = λ₂/ω₀ of the g2 isochore, linearly spaced.
    Xi { min: f64, max: f64 },
    /// Inter-qubit coupling γ, linearly spaced.
    Gamma { min: f64, max: f64 },
    /// Distance 1 − g2 from the critical point, log-spaced:
    /// depth_j = 10^(−(2 + j/per_decade)) for j = 0..=decades·per_decade.
    CriticalDepth { decades: usize, per_decade: usize },
}

/// Full description of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub preset: Preset,
    pub axis: Axis,
    /// Number of axis points for the linear axes (≥ 2); ignored for
    /// [`Axis::CriticalDepth`], whose grid is set by decades·per_decade.
    pub points: usize,
    pub omega0: f64,
    pub epsilon: f64,
    pub g1: f64,
    /// Curve family over γ; must be empty when the axis itself is γ.
    pub gammas: Vec<f64>,
    /// Curve family over the cold temperature.
    pub t_colds: Vec<f64>,
    /// Fixed ξ of the g2 isochore, used only when the axis is γ.
    pub xi: f64,
    /// Hot-to-cold temperature ratio.
    pub alpha: f64,
    pub critical_tol: f64,
}

/// The bundled configurations. All share ω₀ = 0.4π, ε = ω₀, g1 = 0.1.
pub fn preset_sweep(preset: Preset) -> SweepSpec {
    let omega0 = 0.4 * PI;
    let base = SweepSpec {
        preset,
        axis: Axis::Xi {
            min: 3.2,
            max: 15.5,
        },
        points: 64,
        omega0,
        epsilon: omega0,
        g1: 0.1,
        gammas: vec![200.0 * PI],
        t_colds: vec![0.008 * PI],
        xi: 9.0,
        alpha: 1.5,
        critical_tol: DEFAULT_CRITICAL_TOL,
    };
    match preset {
        Preset::Fig2 => SweepSpec {
            gammas: vec![200.0 * PI, 300.0 * PI, 400.0 * PI, 500.0 * PI],
            ..base
        },
        Preset::Fig3 => SweepSpec {
            axis: Axis::Gamma {
                min: 100.0 * PI,
                max: 1000.0 * PI,
            },
            gammas: vec![],
            t_colds: vec![0.008 * PI, 0.016 * PI, 0.024 * PI, 0.032 * PI],
            alpha: 1.4,
            ..base
        },
        Preset::Fig4 => SweepSpec {
            axis: Axis::Xi {
                min: 16.0,
                max: 30.0,
            },
            t_colds: vec![0.002 * PI, 0.006 * PI, 0.010 * PI, 0.014 * PI],
            ..base
        },
        Preset::Scaling => SweepSpec {
            axis: Axis::CriticalDepth {
                decades: 6,
                per_decade: 4,
            },
            ..base
        },
    }
}

/// Linearly spaced grid with both endpoints exact. Interior points are
/// min + (max − min)·i/(n − 1), with the product formed before the division
/// so that commensurate grids (e.g. 64 points over [100, 1000]) hit round
/// interior values exactly.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "linspace needs at least 2 points");
    (0..n)
        .map(|i| {
            if i == n - 1 {
                max
            } else {
                min + (max - min) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Log-spaced critical depths 10^(−(2 + j/per_decade)) for
/// j = 0..=decades·per_decade: from 1e-2 down through `decades` further
/// decades.
pub fn critical_depths(decades: usize, per_decade: usize) -> Vec<f64> {
    (0..=decades * per_decade)
        .map(|j| 10f64.powf(-(2.0 + j as f64 / per_decade as f64)))
        .collect()
}

/// Outcome of one sweep point.
// Skipped rows are rare; boxing the common variant would tax every access.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone, PartialEq)]
pub enum PointOutcome {
    Cycle(CycleResult),
    /// The g2 isochore fell inside the critical exclusion window; the point
    /// is reported but carries no cycle data.
    SkippedCritical,
}

/// One evaluated sweep point with its full parameter context.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub preset: Preset,
    pub xi: f64,
    pub zeta: f64,
    pub gamma: f64,
    pub omega0: f64,
    pub g1: f64,
    pub g2: f64,
    pub t_cold: f64,
    pub t_hot: f64,
    pub alpha: f64,
    pub outcome: PointOutcome,
}

struct Job {
    gamma: f64,
    t_cold: f64,
    /// ξ for the Xi axis, γ for the Gamma axis, depth for CriticalDepth.
    axis_value: f64,
}

fn validate_spec(spec: &SweepSpec) -> Result<()> {
    require_positive("omega0", spec.omega0)?;
    crate::error::require_non_negative("epsilon", spec.epsilon)?;
    crate::error::require_non_negative("g1", spec.g1)?;
    if spec.alpha <= 1.0 || !spec.alpha.is_finite() {
        return Err(Error::domain(format!(
            "alpha must be > 1, got {}",
            spec.alpha
        )));
    }
    if spec.t_colds.is_empty() {
        return Err(Error::domain("at least one cold temperature required"));
    }
    for &t in &spec.t_colds {
        require_positive("t_cold", t)?;
    }
    match spec.axis {
        Axis::Gamma { min, max } => {
            if !spec.gammas.is_empty() {
                return Err(Error::domain(
                    "gamma curve values conflict with a gamma axis",
                ));
            }
            require_positive("gamma axis min", min)?;
            if max <= min {
                return Err(Error::domain("axis max must exceed min"));
            }
            require_positive("xi", spec.xi)?;
            if spec.points < 2 {
                return Err(Error::domain("a linear axis needs at least 2 points"));
            }
        }
        Axis::Xi { min, max } => {
            crate::error::require_non_negative("xi axis min", min)?;
            if max <= min {
                return Err(Error::domain("axis max must exceed min"));
            }
            if spec.gammas.is_empty() {
                return Err(Error::domain("at least one gamma curve value required"));
            }
            for &gm in &spec.gammas {
                require_positive("gamma", gm)?;
            }
            if spec.points < 2 {
                return Err(Error::domain("a linear axis needs at least 2 points"));
            }
        }
        Axis::CriticalDepth {
            decades,
            per_decade,
        } => {
            if decades == 0 || per_decade == 0 {
                return Err(Error::domain("decades and per_decade must be at least 1"));
            }
            if spec.gammas.is_empty() {
                return Err(Error::domain("at least one gamma curve value required"));
            }
            let deepest = 10f64.powf(-(2.0 + decades as f64));
            if deepest <= spec.critical_tol {
                return Err(Error::domain(format!(
                    "deepest scaling point 1 − g2 = {deepest:e} would fall inside the \
                     critical exclusion window ({:e})",
                    spec.critical_tol
                )));
            }
        }
    }
    Ok(())
}

fn jobs(spec: &SweepSpec) -> Vec<Job> {
    let mut out = Vec::new();
    match spec.axis {
        Axis::Gamma { min, max } => {
            let axis = linspace(min, max, spec.points);
            for &t_cold in &spec.t_colds {
                for &g in &axis {
                    out.push(Job {
                        gamma: g,
                        t_cold,
                        axis_value: g,
                    });
                }
            }
        }
        Axis::Xi { min, max } => {
            let axis = linspace(min, max, spec.points);
            for &gamma in &spec.gammas {
                for &t_cold in &spec.t_colds {
                    for &x in &axis {
                        out.push(Job {
                            gamma,
                            t_cold,
                            axis_value: x,
                        });
                    }
                }
            }
        }
        Axis::CriticalDepth {
            decades,
            per_decade,
        } => {
            let axis = critical_depths(decades, per_decade);
            for &gamma in &spec.gammas {
                for &t_cold in &spec.t_colds {
                    for &d in &axis {
                        out.push(Job {
                            gamma,
                            t_cold,
                            axis_value: d,
                        });
                    }
                }
            }
        }
    }
    out
}

fn evaluate(spec: &SweepSpec, job: &Job) -> Result<SweepPoint> {
    let omega0 = spec.omega0;
    let gamma = job.gamma;
    let zeta = gamma / omega0;
    let (xi, g2) = match spec.axis {
        Axis::Xi { .. } => {
            let xi = job.axis_value;
            (
                xi,
                crate::medium::effective_coupling(omega0, gamma, xi * omega0),
            )
        }
        Axis::Gamma { .. } => {
            let xi = spec.xi;
            (
                xi,
                crate::medium::effective_coupling(omega0, gamma, xi * omega0),
            )
        }
        Axis::CriticalDepth { .. } => {
            let g2 = 1.0 - job.axis_value;
            (g2 * (zeta / 2.0).sqrt(), g2)
        }
    };
    let medium = MediumParams::new(omega0, spec.epsilon, gamma, 0.0)?;
    let t_hot = spec.alpha * job.t_cold;
    let point = |outcome| SweepPoint {
        preset: spec.preset,
        xi,
        zeta,
        gamma,
        omega0,
        g1: spec.g1,
        g2,
        t_cold: job.t_cold,
        t_hot,
        alpha: spec.alpha,
        outcome,
    };
    if (g2 - 1.0).abs() < spec.critical_tol {
        return Ok(point(PointOutcome::SkippedCritical));
    }
    let cycle = StirlingCycle::from_ratio(spec.g1, g2, job.t_cold, spec.alpha)?
        .with_critical_tol(spec.critical_tol)?;
    match run_cycle(&cycle, &medium) {
        Ok(result) => Ok(point(PointOutcome::Cycle(result))),
        Err(Error::CriticalPoint { .. }) => Ok(point(PointOutcome::SkippedCritical)),
        Err(e) => Err(e),
    }
}

/// Evaluates every point of a sweep. Points are computed in parallel but
/// returned in deterministic (curve-major, axis-minor) order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    validate_spec(spec)?;
    let jobs = jobs(spec);
    jobs.par_iter().map(|job| evaluate(spec, job)).collect()
}

/// One point of the critical-scaling scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPoint {
    /// Distance 1 − g2 from the critical point.
    pub depth: f64,
    pub g2: f64,
    pub eta: f64,
    pub eta_carnot: f64,
    /// (η_c − η)·|ln(gap₂/t_hot)| with the actual spectral gap; should
    /// plateau at |Λ| as the gap closes.
    pub p_gap: f64,
    /// Same statistic with the gap replaced by its critical scaling form
    /// |g2 − 1|^(1/2).
    pub p_scaling: f64,
}

/// Inputs of the critical-scaling scan. The default reproduces the bundled
/// `scaling` preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingSpec {
    pub omega0: f64,
    pub epsilon: f64,
    pub gamma: f64,
    pub g1: f64,
    pub t_cold: f64,
    pub alpha: f64,
    pub decades: usize,
    pub per_decade: usize,
    pub critical_tol: f64,
}

impl Default for ScalingSpec {
    fn default() -> Self {
        let omega0 = 0.4 * PI;
        Self {
            omega0,
            epsilon: omega0,
            gamma: 200.0 * PI,
            g1: 0.1,
            t_cold: 0.008 * PI,
            alpha: 1.5,
            decades: 6,
            per_decade: 4,
            critical_tol: DEFAULT_CRITICAL_TOL,
        }
    }
}

/// Result of the critical-scaling scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingScan {
    /// Points ordered from shallow to deep (decreasing depth).
    pub points: Vec<ScalingPoint>,
    /// Relative spread (max − min)/mean of `p_gap` over the final decade of
    /// depths; small values certify the logarithmic plateau.
    pub plateau_spread_gap: f64,
    /// Relative spread of `p_scaling` over the final decade.
    pub plateau_spread_scaling: f64,
}

/// Scans the efficiency as g2 = 1 − depth approaches the critical point and
/// forms the plateau statistic that exposes the logarithmic Carnot approach.
pub fn scaling_scan(spec: &ScalingSpec) -> Result<ScalingScan> {
    require_positive("omega0", spec.omega0)?;
    require_positive("gamma", spec.gamma)?;
    require_positive("t_cold", spec.t_cold)?;
    if spec.decades == 0 || spec.per_decade == 0 {
        return Err(Error::domain("decades and per_decade must be at least 1"));
    }
    let depths = critical_depths(spec.decades, spec.per_decade);
    let deepest = *depths.last().expect("non-empty grid");
    if deepest <= spec.critical_tol {
        return Err(Error::domain(format!(
            "deepest scaling point 1 − g2 = {deepest:e} would fall inside the critical \
             exclusion window ({:e})",
            spec.critical_tol
        )));
    }
    let medium = MediumParams::new(spec.omega0, spec.epsilon, spec.gamma, 0.0)?;
    let t_hot = spec.alpha * spec.t_cold;
    let points: Vec<ScalingPoint> = depths
        .par_iter()
        .map(|&depth| -> Result<ScalingPoint> {
            let g2 = 1.0 - depth;
            let cycle = StirlingCycle::from_ratio(spec.g1, g2, spec.t_cold, spec.alpha)?
                .with_critical_tol(spec.critical_tol)?;
            let r = run_cycle(&cycle, &medium)?;
            let gap2 =
                effective_spectrum_for_g(g2, spec.omega0, spec.gamma, spec.critical_tol)?.gap;
            let defect = r.eta_carnot - r.eta;
            Ok(ScalingPoint {
                depth,
                g2,
                eta: r.eta,
                eta_carnot: r.eta_carnot,
                p_gap: defect * (gap2 / t_hot).ln().abs(),
                p_scaling: defect * (depth.sqrt() / t_hot).ln().abs(),
            })
        })
        .collect::<Result<_>>()?;
    let final_decade = &points[points.len() - spec.per_decade - 1..];
    let spread = |f: &dyn Fn(&ScalingPoint) -> f64| {
        let lo = final_decade.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = final_decade.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        let mean = final_decade.iter().map(f).sum::<f64>() / final_decade.len() as f64;
        (hi - lo) / mean
    };
    Ok(ScalingScan {
        plateau_spread_gap: spread(&|p| p.p_gap),
        plateau_spread_scaling: spread(&|p| p.p_scaling),
        points,
    })
}

/// Column order of the CSV schema.
pub const CSV_COLUMNS: [&str; 22] = [
    "figure", "xi", "zeta", "gamma", "omega0", "g1", "g2", "T_C", "T_H", "alpha", "Q_AB", "Q_BC",
    "Q_CD", "Q_DA", "W", "Q_in", "eta", "eta_c", "sigma1", "sigma2", "Lambda", "flags",
];

/// Formats a float for CSV with 17 significant digits (round-trip exact).
pub fn fmt_csv_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

fn flags_field(outcome: &PointOutcome) -> String {
    match outcome {
        PointOutcome::SkippedCritical => "critical_skipped".to_string(),
        PointOutcome::Cycle(r) => {
            let mut parts = Vec::new();
            if r.flags.not_an_engine {
                parts.push("not_an_engine");
            }
            if r.flags.effective_model_suspect {
                parts.push("effective_model_suspect");
            }
            parts.join(";")
        }
    }
}

/// Writes sweep points as CSV: optional `# `-prefixed comment lines, a
/// header row, then one row per point. Floats use 17 significant digits, so
/// output is byte-reproducible and round-trips exactly.
pub fn write_csv<W: io::Write>(
    points: &[SweepPoint],
    comments: &[String],
    w: &mut W,
) -> io::Result<()> {
    for line in comments {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{}", CSV_COLUMNS.join(","))?;
    for p in points {
        let (q_ab, q_bc, q_cd, q_da, work, q_in, eta, eta_c, s1, s2, lam) = match &p.outcome {
            PointOutcome::Cycle(r) => (
                r.q_ab,
                r.q_bc,
                r.q_cd,
                r.q_da,
                r.work,
                r.q_in,
                r.eta,
                r.eta_carnot,
                r.sigma1,
                r.sigma2,
                r.lambda_correction,
            ),
            PointOutcome::SkippedCritical => (
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
                f64::NAN,
            ),
        };
        let fields = [
            p.preset.name().to_string(),
            fmt_csv_f64(p.xi),
            fmt_csv_f64(p.zeta),
            fmt_csv_f64(p.gamma),
            fmt_csv_f64(p.omega0),
            fmt_csv_f64(p.g1),
            fmt_csv_f64(p.g2),
            fmt_csv_f64(p.t_cold),
            fmt_csv_f64(p.t_hot),
            fmt_csv_f64(p.alpha),
            fmt_csv_f64(q_ab),
            fmt_csv_f64(q_bc),
            fmt_csv_f64(q_cd),
            fmt_csv_f64(q_da),
            fmt_csv_f64(work),
            fmt_csv_f64(q_in),
            fmt_csv_f64(eta),
            fmt_csv_f64(eta_c),
            fmt_csv_f64(s1),
            fmt_csv_f64(s2),
            fmt_csv_f64(lam),
            flags_field(&p.outcome),
        ];
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}
