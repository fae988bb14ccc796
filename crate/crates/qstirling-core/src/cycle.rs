//! The quantum Stirling cycle.
//!
//! Four strokes between two temperatures T_cold < T_hot and two effective
//! couplings g1, g2, visiting the corners
//!
//! ```text
//!   A = (T_hot,  g1)  --isothermal-->  B = (T_hot,  g2)
//!   B                 --isochoric -->  C = (T_cold, g2)
//!   C                 --isothermal-->  D = (T_cold, g1)
//!   D                 --isochoric -->  A
//! ```
//!
//! Heats are positive when absorbed by the medium: the isothermal legs
//! exchange Q = T·ΔS, the isochoric legs Q = ΔU at fixed spectrum. Work
//! output is the cycle sum; input heat is the total absorbed on the two legs
//! ending at the hot corner A and leaving it (D→A and A→B).
//!
//! Isochoric energy differences are formed from the thermal part of the
//! internal energy only: the ground energy is common to both endpoints of an
//! isochore and is orders of magnitude larger than the heats in the
//! quantum-frozen regime, so including it first would destroy the result by
//! cancellation.

use crate::error::{require_positive, Error, Result};
use crate::fullmodel::{converged_spectrum, ConvergenceSettings};
use crate::medium::{effective_spectrum_for_g, lambda_for_g, MediumParams, DEFAULT_CRITICAL_TOL};
use crate::thermo::{spectrum_thermo, tower_thermo};

/// Occupation threshold for trusting the single-branch effective
/// description: if the Boltzmann weight e^(−2γ/T_hot) of the neglected upper
/// qubit branch exceeds this, the cycle result is flagged as suspect.
pub const MODEL_VALIDITY_OCCUPATION: f64 = 1e-6;

/// How the medium's spectrum is obtained when evaluating the cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MediumMode {
    /// Closed-form gapped-tower spectrum (dispersive-limit effective model).
    Effective,
    /// Numerically exact even-sector spectrum from a converged Fock-space
    /// diagonalization.
    Exact(ExactOptions),
}

/// Tuning for the exact-diagonalization medium mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    /// Initial Fock occupation cutoff; doubled until the spectrum converges.
    pub fock_start: usize,
    /// Hard cap on the matrix dimension during doubling.
    pub dim_cap: usize,
    /// Convergence tolerance on the tracked levels, in units of ω₀.
    pub rel_tol: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            fock_start: 32,
            dim_cap: 8192,
            rel_tol: 1e-8,
        }
    }
}

/// Inputs of a quantum Stirling cycle: the two isochore couplings and the two
/// bath temperatures. Validated at construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingCycle {
    g1: f64,
    g2: f64,
    t_cold: f64,
    t_hot: f64,
    critical_tol: f64,
    mode: MediumMode,
}

impl StirlingCycle {
    /// Builds a cycle from explicit temperatures. Requires
    /// 0 < t_cold < t_hot, g1 ≠ g2, g1, g2 ≥ 0 and finite.
    pub fn new(g1: f64, g2: f64, t_cold: f64, t_hot: f64) -> Result<Self> {
        crate::error::require_non_negative("g1", g1)?;
        crate::error::require_non_negative("g2", g2)?;
        require_positive("t_cold", t_cold)?;
        require_positive("t_hot", t_hot)?;
        if t_hot <= t_cold {
            return Err(Error::domain(format!(
                "temperatures must satisfy t_hot > t_cold > 0, got t_cold = {t_cold}, t_hot = {t_hot}"
            )));
        }
        if g1 == g2 {
            return Err(Error::DegenerateCycle { g: g1 });
        }
        Ok(Self {
            g1,
            g2,
            t_cold,
            t_hot,
            critical_tol: DEFAULT_CRITICAL_TOL,
            mode: MediumMode::Effective,
        })
    }

    /// Builds a cycle from the cold temperature and the temperature ratio
    /// α = t_hot/t_cold > 1.
    pub fn from_ratio(g1: f64, g2: f64, t_cold: f64, alpha: f64) -> Result<Self> {
        require_positive("t_cold", t_cold)?;
        crate::error::require_finite("alpha", alpha)?;
        if alpha <= 1.0 {
            return Err(Error::domain(format!(
                "temperature ratio alpha must be > 1, got {alpha}"
            )));
        }
        Self::new(g1, g2, t_cold, alpha * t_cold)
    }

    /// Replaces the medium mode (effective vs exact).
    pub fn with_mode(mut self, mode: MediumMode) -> Self {
        self.mode = mode;
        self
    }

    /// Replaces the critical-window tolerance.
    pub fn with_critical_tol(mut self, tol: f64) -> Result<Self> {
        require_positive("critical_tol", tol)?;
        self.critical_tol = tol;
        Ok(self)
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }
    pub fn g2(&self) -> f64 {
        self.g2
    }
    pub fn t_cold(&self) -> f64 {
        self.t_cold
    }
    pub fn t_hot(&self) -> f64 {
        self.t_hot
    }
    /// Temperature ratio t_hot/t_cold.
    pub fn alpha(&self) -> f64 {
        self.t_hot / self.t_cold
    }
    pub fn critical_tol(&self) -> f64 {
        self.critical_tol
    }
    pub fn mode(&self) -> MediumMode {
        self.mode
    }
}

/// Carnot efficiency 1 − 1/α for a temperature ratio α = t_hot/t_cold > 1.
pub fn carnot_efficiency(alpha: f64) -> Result<f64> {
    crate::error::require_finite("alpha", alpha)?;
    if alpha <= 1.0 {
        return Err(Error::domain(format!(
            "temperature ratio alpha must be > 1, got {alpha}"
        )));
    }
    Ok(1.0 - 1.0 / alpha)
}

/// Thermodynamic state at one cycle corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerState {
    /// Bath temperature at this corner.
    pub temperature: f64,
    /// Effective coupling of the isochore this corner sits on.
    pub g: f64,
    /// Absolute internal energy (includes the ground energy).
    pub u: f64,
    /// Internal energy measured from the ground level of this isochore's
    /// spectrum; differences along an isochore must use this field.
    pub u_thermal: f64,
    /// Entropy.
    pub s: f64,
}

/// Health flags attached to a cycle result instead of failing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CycleFlags {
    /// Set when the cycle does not operate as an engine
    /// (needs both work > 0 and q_in > 0).
    pub not_an_engine: bool,
    /// Set when the neglected upper branch of the medium would be thermally
    /// occupied beyond [`MODEL_VALIDITY_OCCUPATION`] at the hot temperature.
    pub effective_model_suspect: bool,
}

/// Full output of one cycle evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleResult {
    /// Heat absorbed on the hot isotherm A→B.
    pub q_ab: f64,
    /// Heat absorbed on the isochore B→C (cooling at g2).
    pub q_bc: f64,
    /// Heat absorbed on the cold isotherm C→D.
    pub q_cd: f64,
    /// Heat absorbed on the isochore D→A (heating at g1).
    pub q_da: f64,
    /// Net work output, the sum of all four heats.
    pub work: f64,
    /// Input heat q_ab + q_da (the legs that draw from the hot side of the
    /// regenerative cycle).
    pub q_in: f64,
    /// Efficiency work/q_in. May be non-finite if q_in vanishes; check
    /// `flags.not_an_engine`.
    pub eta: f64,
    /// Carnot efficiency 1 − t_cold/t_hot at the same temperatures.
    pub eta_carnot: f64,
    /// Relative isochoric imbalance (q_bc − t_cold·(Δs_da + Δs_bc))/q_ab.
    pub sigma1: f64,
    /// Relative regenerator mismatch q_da/q_ab.
    pub sigma2: f64,
    /// Carnot-defect amplitude
    /// Λ = (1 − η_c)·(q_da/t_hot + q_bc/t_cold − Δs_da − Δs_bc);
    /// strictly negative for any working cycle (second law).
    pub lambda_correction: f64,
    /// Corner states in cycle order [A, B, C, D].
    pub corners: [CornerState; 4],
    pub flags: CycleFlags,
    /// Largest Fock cutoff used, when the exact medium mode ran.
    pub fock_max_used: Option<usize>,
}

impl CycleResult {
    /// True when the cycle produced net work from net absorbed heat.
    pub fn is_engine(&self) -> bool {
        !self.flags.not_an_engine
    }
}

struct CornerThermo {
    u_thermal: f64,
    u: f64,
    s: f64,
}

/// Evaluates the cycle for a medium with the frequencies and couplings of
/// `medium`. The medium's λ is not used directly: each isochore derives its
/// own λ from the cycle's g1/g2 at the medium's ω₀ and γ.
pub fn run_cycle(cycle: &StirlingCycle, medium: &MediumParams) -> Result<CycleResult> {
    let omega0 = medium.omega0();
    let gamma = medium.gamma();
    let spec1 = effective_spectrum_for_g(cycle.g1, omega0, gamma, cycle.critical_tol)?;
    let spec2 = effective_spectrum_for_g(cycle.g2, omega0, gamma, cycle.critical_tol)?;

    let (corners, fock_max_used) = match cycle.mode {
        MediumMode::Effective => {
            let a = tower_thermo(&spec1, cycle.t_hot)?;
            let b = tower_thermo(&spec2, cycle.t_hot)?;
            let c = tower_thermo(&spec2, cycle.t_cold)?;
            let d = tower_thermo(&spec1, cycle.t_cold)?;
            let conv = |t: crate::thermo::TowerThermo| CornerThermo {
                u_thermal: t.u_thermal,
                u: t.u,
                s: t.s,
            };
            ([conv(a), conv(b), conv(c), conv(d)], None)
        }
        MediumMode::Exact(opts) => {
            // Enough levels that the Boltzmann tail above the tracked window
            // is negligible even with two-fold degenerate rungs.
            let levels_for = |gap: f64| -> usize {
                let needed = (90.0 * cycle.t_hot / gap).ceil();
                let needed = if needed.is_finite() {
                    needed as usize
                } else {
                    usize::MAX
                };
                needed.saturating_add(16).clamp(16, 512)
            };
            let settings1 = ConvergenceSettings {
                levels: levels_for(spec1.gap),
                fock_start: opts.fock_start,
                dim_cap: opts.dim_cap,
                tol: opts.rel_tol * omega0,
            };
            let settings2 = ConvergenceSettings {
                levels: levels_for(spec2.gap),
                ..settings1
            };
            let params1 = MediumParams::new(
                omega0,
                medium.epsilon(),
                gamma,
                lambda_for_g(cycle.g1, omega0, gamma)?,
            )?;
            let params2 = params1.with_g(cycle.g2)?;
            let conv1 = converged_spectrum(&params1, &settings1)?;
            let conv2 = converged_spectrum(&params2, &settings2)?;
            let corner = |levels: &[f64], t: f64| -> Result<CornerThermo> {
                let st = spectrum_thermo(levels, t)?;
                Ok(CornerThermo {
                    u_thermal: st.u_above_ground,
                    u: st.u,
                    s: st.s,
                })
            };
            let a = corner(&conv1.levels, cycle.t_hot)?;
            let b = corner(&conv2.levels, cycle.t_hot)?;
            let c = corner(&conv2.levels, cycle.t_cold)?;
            let d = corner(&conv1.levels, cycle.t_cold)?;
            ([a, b, c, d], Some(conv1.fock_max.max(conv2.fock_max)))
        }
    };

    let [a, b, c, d] = &corners;
    let q_ab = cycle.t_hot * (b.s - a.s);
    let q_bc = c.u_thermal - b.u_thermal;
    let q_cd = cycle.t_cold * (d.s - c.s);
    let q_da = a.u_thermal - d.u_thermal;
    let work = q_ab + q_bc + q_cd + q_da;
    let q_in = q_ab + q_da;
    let eta = work / q_in;
    let eta_carnot = 1.0 - cycle.t_cold / cycle.t_hot;

    let ds_da = a.s - d.s;
    let ds_bc = c.s - b.s;
    let sigma1 = (q_bc - cycle.t_cold * (ds_da + ds_bc)) / q_ab;
    let sigma2 = q_da / q_ab;
    let lambda_correction =
        (1.0 - eta_carnot) * (q_da / cycle.t_hot + q_bc / cycle.t_cold - ds_da - ds_bc);

    let flags = CycleFlags {
        not_an_engine: !(work > 0.0 && q_in > 0.0),
        effective_model_suspect: (-2.0 * gamma / cycle.t_hot).exp() > MODEL_VALIDITY_OCCUPATION,
    };

    let corner_state = |ct: &CornerThermo, t: f64, g: f64| CornerState {
        temperature: t,
        g,
        u: ct.u,
        u_thermal: ct.u_thermal,
        s: ct.s,
    };
    let corners = [
        corner_state(a, cycle.t_hot, cycle.g1),
        corner_state(b, cycle.t_hot, cycle.g2),
        corner_state(c, cycle.t_cold, cycle.g2),
        corner_state(d, cycle.t_cold, cycle.g1),
    ];

    Ok(CycleResult {
        q_ab,
        q_bc,
        q_cd,
        q_da,
        work,
        q_in,
        eta,
        eta_carnot,
        sigma1,
        sigma2,
        lambda_correction,
        corners,
        flags,
        fock_max_used,
    })
}

/// Near-critical asymptotics of the efficiency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEfficiency {
    /// The cycle's actual efficiency at this point.
    pub eta: f64,
    /// Leading-order prediction η_c − Λ/ln(gap₂/t_hot) using the actual
    /// spectral gap at g2.
    pub predicted: f64,
    /// Same prediction with the gap replaced by its critical scaling form
    /// |g2 − 1|^(1/2) (gap exponent zν = 1/2); differs from `predicted` by a
    /// vanishing O(1/ln²) amount as g2 → 1.
    pub predicted_scaling_form: f64,
    /// The Carnot-defect amplitude Λ entering both predictions.
    pub lambda_correction: f64,
}

/// Evaluates the cycle (in effective mode) and the logarithmic closing-gap
/// prediction of its efficiency. Meaningful when the g2-isochore approaches
/// the critical point, where the prediction converges to the true η.
pub fn asymptotic_efficiency(
    cycle: &StirlingCycle,
    medium: &MediumParams,
) -> Result<AsymptoticEfficiency> {
    let effective = StirlingCycle {
        mode: MediumMode::Effective,
        ..*cycle
    };
    let result = run_cycle(&effective, medium)?;
    let spec2 = effective_spectrum_for_g(
        cycle.g2,
        medium.omega0(),
        medium.gamma(),
        cycle.critical_tol,
    )?;
    let log_gap = (spec2.gap / cycle.t_hot).ln();
    if log_gap == 0.0 {
        return Err(Error::domain(
            "asymptotic form undefined where the g2 gap equals t_hot",
        ));
    }
    let scaling_gap = (cycle.g2 - 1.0).abs().sqrt();
    let log_scaling = (scaling_gap / cycle.t_hot).ln();
    if log_scaling == 0.0 {
        return Err(Error::domain(
            "asymptotic scaling form undefined where |g2 − 1|^(1/2) equals t_hot",
        ));
    }
    let lambda = result.lambda_correction;
    Ok(AsymptoticEfficiency {
        eta: result.eta,
        predicted: result.eta_carnot - lambda / log_gap,
        predicted_scaling_form: result.eta_carnot - lambda / log_scaling,
        lambda_correction: lambda,
    })
}
