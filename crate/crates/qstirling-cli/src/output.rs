//! Rendering of results as text, JSON, and SVG.

use qstirling_core::cycle::{CycleResult, StirlingCycle};
use qstirling_core::fullmodel::GapComparison;
use qstirling_core::medium::EffectiveSpectrum;
use qstirling_core::sweep::{Axis, PointOutcome, SweepPoint, SweepSpec};
use serde_json::{json, Value};

/// Full-precision float formatting (17 significant digits, round-trip safe).
pub fn fmt_full(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Renders the merged configuration as `# key = value` echo lines.
pub fn config_lines(pairs: &[(&str, String)]) -> Vec<String> {
    pairs.iter().map(|(k, v)| format!("{k} = {v}")).collect()
}

fn echo_block(pairs: &[(&str, String)]) -> String {
    config_lines(pairs)
        .into_iter()
        .map(|l| format!("# {l}\n"))
        .collect()
}

fn config_json(pairs: &[(&str, String)]) -> Value {
    let mut map = serde_json::Map::new();
    for (k, v) in pairs {
        // Numbers stay numbers in JSON where they parse as such.
        let val = v
            .parse::<f64>()
            .ok()
            .and_then(serde_json::Number::from_f64)
            .map(Value::Number)
            .unwrap_or_else(|| Value::String(v.clone()));
        map.insert((*k).to_string(), val);
    }
    Value::Object(map)
}

pub fn gap_text(pairs: &[(&str, String)], g: f64, spectrum: &EffectiveSpectrum) -> String {
    let mut out = echo_block(pairs);
    out.push_str(&format!("phase         = {}\n", spectrum.phase));
    out.push_str(&format!("g             = {}\n", fmt_full(g)));
    out.push_str(&format!("gap           = {}\n", fmt_full(spectrum.gap)));
    out.push_str(&format!(
        "ground_energy = {}\n",
        fmt_full(spectrum.ground_energy)
    ));
    out.push_str(&format!("degeneracy    = {}\n", spectrum.degeneracy));
    out
}

pub fn gap_json(pairs: &[(&str, String)], g: f64, spectrum: &EffectiveSpectrum) -> Value {
    json!({
        "config": config_json(pairs),
        "phase": spectrum.phase.to_string(),
        "g": g,
        "gap": spectrum.gap,
        "ground_energy": spectrum.ground_energy,
        "degeneracy": spectrum.degeneracy,
    })
}

fn flags_text(r: &CycleResult) -> String {
    let mut parts = Vec::new();
    if r.flags.not_an_engine {
        parts.push("not_an_engine");
    }
    if r.flags.effective_model_suspect {
        parts.push("effective_model_suspect");
    }
    if parts.is_empty() {
        "(none)".to_string()
    } else {
        parts.join(";")
    }
}

pub fn cycle_text(pairs: &[(&str, String)], result: &CycleResult) -> String {
    let mut out = echo_block(pairs);
    out.push_str("corner  T                        g                        U                        U_thermal                S\n");
    for (label, c) in ["A", "B", "C", "D"].iter().zip(&result.corners) {
        out.push_str(&format!(
            "{label}       {:<24} {:<24} {:<24} {:<24} {}\n",
            fmt_full(c.temperature),
            fmt_full(c.g),
            fmt_full(c.u),
            fmt_full(c.u_thermal),
            fmt_full(c.s)
        ));
    }
    let rows = [
        ("Q_AB", result.q_ab),
        ("Q_BC", result.q_bc),
        ("Q_CD", result.q_cd),
        ("Q_DA", result.q_da),
        ("W", result.work),
        ("Q_in", result.q_in),
        ("eta", result.eta),
        ("eta_c", result.eta_carnot),
        ("sigma1", result.sigma1),
        ("sigma2", result.sigma2),
        ("Lambda", result.lambda_correction),
    ];
    for (name, value) in rows {
        out.push_str(&format!("{name:<7}= {}\n", fmt_full(value)));
    }
    out.push_str(&format!("flags  = {}\n", flags_text(result)));
    if let Some(n) = result.fock_max_used {
        out.push_str(&format!("fock_max = {n}\n"));
    }
    out
}

pub fn cycle_json(pairs: &[(&str, String)], cycle: &StirlingCycle, result: &CycleResult) -> Value {
    let corners: Vec<Value> = ["A", "B", "C", "D"]
        .iter()
        .zip(&result.corners)
        .map(|(label, c)| {
            json!({
                "corner": label,
                "temperature": c.temperature,
                "g": c.g,
                "u": c.u,
                "u_thermal": c.u_thermal,
                "s": c.s,
            })
        })
        .collect();
    json!({
        "config": config_json(pairs),
        "alpha": cycle.alpha(),
        "corners": corners,
        "q_ab": result.q_ab,
        "q_bc": result.q_bc,
        "q_cd": result.q_cd,
        "q_da": result.q_da,
        "work": result.work,
        "q_in": result.q_in,
        "eta": result.eta,
        "eta_carnot": result.eta_carnot,
        "sigma1": result.sigma1,
        "sigma2": result.sigma2,
        "lambda": result.lambda_correction,
        "flags": {
            "not_an_engine": result.flags.not_an_engine,
            "effective_model_suspect": result.flags.effective_model_suspect,
        },
        "fock_max": result.fock_max_used,
    })
}

/// Result of checking one validation row against its tolerance.
pub struct CheckedComparison {
    pub row: GapComparison,
    pub tol: f64,
    pub pass: bool,
}

pub fn validate_text(pairs: &[(&str, String)], rows: &[CheckedComparison]) -> String {
    let mut out = echo_block(pairs);
    out.push_str(
        "zeta        g       phase         fock_max  gap_exact            gap_effective        rel_error   tol     status\n",
    );
    for c in rows {
        let phase = if c.row.g < 1.0 {
            "normal"
        } else {
            "superradiant"
        };
        out.push_str(&format!(
            "{:<11} {:<7} {:<13} {:<9} {:<20} {:<20} {:<11} {:<7} {}\n",
            format!("{}", c.row.zeta),
            format!("{}", c.row.g),
            phase,
            c.row.fock_max,
            format!("{:.13e}", c.row.gap_exact),
            format!("{:.13e}", c.row.gap_effective),
            format!("{:.3e}", c.row.rel_error),
            format!("{}", c.tol),
            if c.pass { "PASS" } else { "FAIL" }
        ));
    }
    let failed = rows.iter().filter(|c| !c.pass).count();
    out.push_str(&format!(
        "result: {} of {} rows within tolerance\n",
        rows.len() - failed,
        rows.len()
    ));
    out
}

pub fn validate_json(pairs: &[(&str, String)], rows: &[CheckedComparison]) -> Value {
    let entries: Vec<Value> = rows
        .iter()
        .map(|c| {
            json!({
                "zeta": c.row.zeta,
                "g": c.row.g,
                "phase": if c.row.g < 1.0 { "normal" } else { "superradiant" },
                "fock_max": c.row.fock_max,
                "gap_exact": c.row.gap_exact,
                "gap_effective": c.row.gap_effective,
                "rel_error": c.row.rel_error,
                "ground_splitting": c.row.ground_splitting,
                "tol": c.tol,
                "pass": c.pass,
            })
        })
        .collect();
    json!({
        "config": config_json(pairs),
        "rows": entries,
        "pass": rows.iter().all(|c| c.pass),
    })
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

struct PlotFrame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl PlotFrame {
    const LEFT: f64 = 80.0;
    const TOP: f64 = 30.0;
    const PLOT_W: f64 = 600.0;
    const PLOT_H: f64 = 480.0;
    const WIDTH: f64 = 880.0;
    const HEIGHT: f64 = 560.0;

    fn x(&self, v: f64) -> f64 {
        Self::LEFT + (v - self.x_min) / (self.x_max - self.x_min) * Self::PLOT_W
    }

    fn y(&self, v: f64) -> f64 {
        Self::TOP + Self::PLOT_H - (v - self.y_min) / (self.y_max - self.y_min) * Self::PLOT_H
    }
}

fn tick_label(v: f64) -> String {
    format!("{v:.3e}")
}

type XAccessor = Box<dyn Fn(&SweepPoint) -> f64>;

/// Renders a sweep as a standalone SVG line plot: one polyline per curve,
/// axis ticks, and a legend. Points without cycle data are left out.
pub fn render_svg(spec: &SweepSpec, points: &[SweepPoint]) -> String {
    let (x_of, x_label): (XAccessor, &str) = match spec.axis {
        Axis::Xi { .. } => (Box::new(|p: &SweepPoint| p.xi), "xi = lambda/omega0"),
        Axis::Gamma { .. } => (Box::new(|p: &SweepPoint| p.gamma), "gamma"),
        Axis::CriticalDepth { .. } => (
            Box::new(|p: &SweepPoint| -(1.0 - p.g2).log10()),
            "decades below critical, -log10(1 - g2)",
        ),
    };
    let axis_len = match spec.axis {
        Axis::CriticalDepth {
            decades,
            per_decade,
        } => decades * per_decade + 1,
        _ => spec.points,
    };
    let eta_of = |p: &SweepPoint| match &p.outcome {
        PointOutcome::Cycle(r) => Some(r.eta),
        PointOutcome::SkippedCritical => None,
    };

    let xs: Vec<f64> = points.iter().map(&x_of).collect();
    let ys: Vec<f64> = points.iter().filter_map(eta_of).collect();
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut y_min, mut y_max) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(y_min.is_finite() && y_max.is_finite()) {
        (y_min, y_max) = (0.0, 1.0);
    }
    let pad = ((y_max - y_min) * 0.05).max(y_max.abs().max(1e-3) * 1e-9);
    let frame = PlotFrame {
        x_min,
        x_max,
        y_min: y_min - pad,
        y_max: y_max + pad,
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n",
        w = PlotFrame::WIDTH,
        h = PlotFrame::HEIGHT
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"18\" font-family=\"sans-serif\" font-size=\"15\">{} sweep: efficiency</text>\n",
        PlotFrame::LEFT,
        spec.preset
    ));

    // Grid, ticks, and tick labels.
    for i in 0..=4 {
        let fx = frame.x_min + (frame.x_max - frame.x_min) * f64::from(i) / 4.0;
        let px = frame.x(fx);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#dddddd\"/>\n",
            PlotFrame::TOP,
            PlotFrame::TOP + PlotFrame::PLOT_H
        ));
        svg.push_str(&format!(
            "<text x=\"{px:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            PlotFrame::TOP + PlotFrame::PLOT_H + 16.0,
            tick_label(fx)
        ));
        let fy = frame.y_min + (frame.y_max - frame.y_min) * f64::from(i) / 4.0;
        let py = frame.y(fy);
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" stroke=\"#dddddd\"/>\n",
            PlotFrame::LEFT,
            PlotFrame::LEFT + PlotFrame::PLOT_W
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            PlotFrame::LEFT - 6.0,
            py + 4.0,
            tick_label(fy)
        ));
    }
    // Frame.
    svg.push_str(&format!(
        "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>\n",
        PlotFrame::LEFT,
        PlotFrame::TOP,
        PlotFrame::PLOT_W,
        PlotFrame::PLOT_H
    ));
    // Axis labels.
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{x_label}</text>\n",
        PlotFrame::LEFT + PlotFrame::PLOT_W / 2.0,
        PlotFrame::TOP + PlotFrame::PLOT_H + 40.0
    ));
    svg.push_str(&format!(
        "<text x=\"16\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 16 {:.2})\" text-anchor=\"middle\">eta</text>\n",
        PlotFrame::TOP + PlotFrame::PLOT_H / 2.0,
        PlotFrame::TOP + PlotFrame::PLOT_H / 2.0
    ));

    // One polyline (broken at skipped points) per curve, plus a legend row.
    for (ci, curve) in points.chunks(axis_len).enumerate() {
        let color = PALETTE[ci % PALETTE.len()];
        let label = match spec.axis {
            Axis::Gamma { .. } => format!("T_C={:.5}", curve[0].t_cold),
            _ => {
                if spec.gammas.len() > 1 && spec.t_colds.len() > 1 {
                    format!("gamma={:.5}, T_C={:.5}", curve[0].gamma, curve[0].t_cold)
                } else if spec.gammas.len() > 1 {
                    format!("gamma={:.5}", curve[0].gamma)
                } else {
                    format!("T_C={:.5}", curve[0].t_cold)
                }
            }
        };
        let mut segment: Vec<String> = Vec::new();
        let flush = |seg: &mut Vec<String>, svg: &mut String| {
            if seg.len() >= 2 {
                svg.push_str(&format!(
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                    seg.join(" ")
                ));
            }
            seg.clear();
        };
        for p in curve {
            match eta_of(p) {
                Some(eta) if eta.is_finite() => {
                    segment.push(format!("{:.2},{:.2}", frame.x(x_of(p)), frame.y(eta)));
                }
                _ => flush(&mut segment, &mut svg),
            }
        }
        flush(&mut segment, &mut svg);
        let ly = PlotFrame::TOP + 14.0 + 18.0 * ci as f64;
        let lx = PlotFrame::LEFT + PlotFrame::PLOT_W + 14.0;
        svg.push_str(&format!(
            "<line x1=\"{lx:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ly - 4.0,
            lx + 22.0,
            ly - 4.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{ly:.2}\" font-family=\"sans-serif\" font-size=\"11\">{label}</text>\n",
            lx + 28.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
