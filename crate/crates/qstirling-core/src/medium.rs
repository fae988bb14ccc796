//! Working-medium parameters and the closed-form low-energy spectrum.
//!
//! The medium is two qubits with opposite biases ±ε/2, coupled to each other
//! with strength γ and to one bosonic mode of frequency ω₀ with equal
//! strengths λ/2. Qubit-parity is conserved, so the Hamiltonian splits into
//! an even sector (which carries the light-matter physics) and an odd sector
//! (which decouples from the mode). In the regime γ ≫ ω₀ the even sector
//! reduces to a single effective two-level system coupled to the mode, and
//! its low-energy spectrum is a harmonic tower above a possibly degenerate
//! ground state. The tower collapses at the critical effective coupling
//! g = 1, signalling a quantum phase transition between a normal and a
//! superradiant phase.

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};

/// Half-width of the exclusion window around the critical coupling g = 1.
/// Requests for an effective spectrum with |g − 1| below this tolerance are
/// rejected: the gap vanishes there and every derived quantity degenerates.
pub const DEFAULT_CRITICAL_TOL: f64 = 1e-9;

/// Physical parameters of the working medium, all in the same energy unit.
///
/// Invariants enforced at construction: ω₀ > 0, γ > 0, ε ≥ 0, λ ≥ 0, all
/// finite. The fields are private so the invariants cannot be broken after
/// construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    omega0: f64,
    epsilon: f64,
    gamma: f64,
    lambda: f64,
}

impl MediumParams {
    /// Validates and bundles the medium parameters.
    pub fn new(omega0: f64, epsilon: f64, gamma: f64, lambda: f64) -> Result<Self> {
        require_positive("omega0", omega0)?;
        require_positive("gamma", gamma)?;
        require_non_negative("epsilon", epsilon)?;
        require_non_negative("lambda", lambda)?;
        Ok(Self {
            omega0,
            epsilon,
            gamma,
            lambda,
        })
    }

    /// Mode frequency ω₀.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Qubit bias magnitude ε (the qubits see ±ε/2).
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Inter-qubit coupling γ.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total qubit-mode coupling λ (each qubit couples with λ/2).
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Dimensionless qubit-mode coupling ξ = λ/ω₀.
    pub fn xi(&self) -> f64 {
        self.lambda / self.omega0
    }

    /// Dimensionless inter-qubit coupling ζ = γ/ω₀.
    pub fn zeta(&self) -> f64 {
        self.gamma / self.omega0
    }

    /// Effective coupling g = √2·λ/√(ω₀γ). The quantum phase transition of
    /// the even sector sits at g = 1.
    pub fn g(&self) -> f64 {
        effective_coupling(self.omega0, self.gamma, self.lambda)
    }

    /// Returns a copy with λ replaced so that the effective coupling is `g`.
    pub fn with_g(&self, g: f64) -> Result<Self> {
        let lambda = lambda_for_g(g, self.omega0, self.gamma)?;
        Self::new(self.omega0, self.epsilon, self.gamma, lambda)
    }

    /// Returns a copy with λ replaced so that ξ = λ/ω₀ is `xi`.
    pub fn with_xi(&self, xi: f64) -> Result<Self> {
        require_non_negative("xi", xi)?;
        Self::new(self.omega0, self.epsilon, self.gamma, xi * self.omega0)
    }

    /// Returns a copy with γ replaced (ζ changes, λ is kept).
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.omega0, self.epsilon, gamma, self.lambda)
    }
}

/// Effective coupling g = √2·λ/√(ω₀γ) of the even sector.
pub fn effective_coupling(omega0: f64, gamma: f64, lambda: f64) -> f64 {
    std::f64::consts::SQRT_2 * lambda / (omega0 * gamma).sqrt()
}

/// Inverts [`effective_coupling`]: the λ that realizes a given g at fixed
/// ω₀ and γ.
pub fn lambda_for_g(g: f64, omega0: f64, gamma: f64) -> Result<f64> {
    require_non_negative("g", g)?;
    require_positive("omega0", omega0)?;
    require_positive("gamma", gamma)?;
    Ok(g * (omega0 * gamma / 2.0).sqrt())
}

/// Which side of the quantum phase transition the medium sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    /// g < 1: unique ground state, gap ω₀√(1 − g²).
    Normal,
    /// g > 1: two-fold degenerate ground state, gap ω₀√(1 − g⁻⁴).
    Superradiant,
}

impl Phase {
    /// Ground-state degeneracy in this phase.
    pub fn degeneracy(&self) -> u32 {
        match self {
            Phase::Normal => 1,
            Phase::Superradiant => 2,
        }
    }
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::Normal => write!(f, "normal"),
            Phase::Superradiant => write!(f, "superradiant"),
        }
    }
}

/// Closed-form low-energy spectrum of the even sector: a harmonic tower of
/// spacing `gap` above a `degeneracy`-fold ground level at `ground_energy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveSpectrum {
    pub phase: Phase,
    /// Tower spacing (the excitation energy), > 0 away from the critical point.
    pub gap: f64,
    /// Energy of the (possibly degenerate) ground level.
    pub ground_energy: f64,
    /// Ground-level degeneracy: 1 in the normal phase, 2 in the superradiant.
    pub degeneracy: u32,
}

/// Computes the effective spectrum of the medium.
///
/// Fails with [`Error::CriticalPoint`] when |g − 1| < `critical_tol`, because
/// the gap closes at the transition and the tower picture breaks down.
pub fn effective_spectrum(params: &MediumParams, critical_tol: f64) -> Result<EffectiveSpectrum> {
    effective_spectrum_for_g(params.g(), params.omega0, params.gamma, critical_tol)
}

/// Same as [`effective_spectrum`], parameterized directly by the effective
/// coupling g instead of λ.
pub fn effective_spectrum_for_g(
    g: f64,
    omega0: f64,
    gamma: f64,
    critical_tol: f64,
) -> Result<EffectiveSpectrum> {
    require_non_negative("g", g)?;
    require_positive("omega0", omega0)?;
    require_positive("gamma", gamma)?;
    require_finite("critical_tol", critical_tol)?;
    if critical_tol <= 0.0 {
        return Err(Error::domain(format!(
            "critical_tol must be > 0, got {critical_tol}"
        )));
    }
    if (g - 1.0).abs() < critical_tol {
        return Err(Error::CriticalPoint {
            g,
            tol: critical_tol,
        });
    }
    if g < 1.0 {
        let gap = omega0 * (1.0 - g * g).sqrt();
        Ok(EffectiveSpectrum {
            phase: Phase::Normal,
            gap,
            ground_energy: 0.5 * gap - gamma,
            degeneracy: 1,
        })
    } else {
        let g2 = g * g;
        let gm2 = 1.0 / g2;
        let gap = omega0 * (1.0 - gm2 * gm2).sqrt();
        Ok(EffectiveSpectrum {
            phase: Phase::Superradiant,
            gap,
            ground_energy: 0.5 * gap - 0.5 * gamma * (g2 + gm2),
            degeneracy: 2,
        })
    }
}
