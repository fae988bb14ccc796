//! Numerically exact treatment of the medium on a truncated Fock space.
//!
//! The two-qubit Hamiltonian conserves qubit parity, so it decomposes into
//! an even sector spanned by {|↓↓⟩, |↑↑⟩} (which carries the qubit-mode
//! coupling) and an odd sector spanned by {|↓↑⟩, |↑↓⟩} (which decouples from
//! the mode). Builders are provided for the full four-state model, for each
//! parity sector, and for the even sector after the π/2 qubit rotation that
//! maps it onto a standard Rabi form — the cheapest faithful representation
//! and the one used by the convergence driver.
//!
//! Eigensolves are dense and symmetric; they run sequentially so results do
//! not depend on thread count. Convergence in the Fock cutoff is established
//! by doubling the cutoff until the tracked low eigenvalues move less than a
//! tolerance.

use crate::error::{require_positive, Error, Result};
use crate::medium::{MediumParams, Phase};
use faer::{Mat, MatRef, Side};
use std::sync::Once;

/// Default hard cap on the matrix dimension.
pub const DEFAULT_DIM_CAP: usize = 8192;

/// Default initial Fock occupation cutoff for the convergence driver.
pub const DEFAULT_FOCK_START: usize = 32;

/// Default convergence tolerance on tracked eigenvalues, in units of ω₀.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Which basis a built Hamiltonian matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectorBasis {
    /// Even parity sector after the π/2 qubit rotation:
    /// H = ω₀a†a + γσᶻ + λ(a†+a)σˣ, dimension 2(N+1).
    RotatedEven,
    /// Even parity sector in the bare basis {|↓↓⟩, |↑↑⟩}:
    /// H = ω₀a†a + γτˣ + λ(a†+a)τᶻ, dimension 2(N+1).
    Even,
    /// Odd parity sector {|↓↑⟩, |↑↓⟩}: H = ω₀a†a + ετᶻ + γτˣ,
    /// dimension 2(N+1); the mode decouples.
    Odd,
    /// Full two-qubit model, dimension 4(N+1).
    FullTwoQubit,
}

impl std::fmt::Display for SectorBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SectorBasis::RotatedEven => write!(f, "rotated-even"),
            SectorBasis::Even => write!(f, "even"),
            SectorBasis::Odd => write!(f, "odd"),
            SectorBasis::FullTwoQubit => write!(f, "full"),
        }
    }
}

/// A dense, symmetric Hamiltonian on a truncated Fock space.
///
/// Basis ordering is spin-major: index = s·(N+1) + n for two-state sectors
/// (s ∈ {0, 1}, n the Fock occupation), and q·(N+1) + n for the full model
/// (q ∈ {0: ↓↓, 1: ↓↑, 2: ↑↓, 3: ↑↑}).
#[derive(Debug, Clone)]
pub struct FockHamiltonian {
    basis: SectorBasis,
    fock_max: usize,
    mat: Mat<f64>,
}

impl FockHamiltonian {
    pub fn basis(&self) -> SectorBasis {
        self.basis
    }

    /// Fock occupation cutoff N (occupations 0..=N are kept).
    pub fn fock_max(&self) -> usize {
        self.fock_max
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> MatRef<'_, f64> {
        self.mat.as_ref()
    }
}

fn check_dims(states: usize, fock_max: usize, dim_cap: usize) -> Result<usize> {
    if fock_max == 0 {
        return Err(Error::domain("fock_max must be at least 1"));
    }
    let dim = states * (fock_max + 1);
    if dim > dim_cap {
        return Err(Error::Size { dim, cap: dim_cap });
    }
    Ok(dim)
}

/// Builds the rotated even sector H = ω₀a†a + γσᶻ + λ(a†+a)σˣ.
///
/// s = 0 carries σᶻ = −1, s = 1 carries σᶻ = +1; the coupling flips the spin
/// while raising or lowering the occupation.
pub fn build_rotated_even(
    params: &MediumParams,
    fock_max: usize,
    dim_cap: usize,
) -> Result<FockHamiltonian> {
    let modes = fock_max + 1;
    let dim = check_dims(2, fock_max, dim_cap)?;
    let (omega0, gamma, lambda) = (params.omega0(), params.gamma(), params.lambda());
    let mut mat = Mat::<f64>::zeros(dim, dim);
    for s in 0..2usize {
        let sz = if s == 1 { 1.0 } else { -1.0 };
        for n in 0..modes {
            let i = s * modes + n;
            mat[(i, i)] = omega0 * n as f64 + gamma * sz;
            if n + 1 < modes {
                let j = (1 - s) * modes + n + 1;
                let v = lambda * ((n + 1) as f64).sqrt();
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
    }
    Ok(FockHamiltonian {
        basis: SectorBasis::RotatedEven,
        fock_max,
        mat,
    })
}

/// Builds the even sector in the bare basis:
/// H = ω₀a†a + γτˣ + λ(a†+a)τᶻ with τᶻ = −1 on |↓↓⟩ (s = 0), +1 on |↑↑⟩.
pub fn build_even_sector(
    params: &MediumParams,
    fock_max: usize,
    dim_cap: usize,
) -> Result<FockHamiltonian> {
    let modes = fock_max + 1;
    let dim = check_dims(2, fock_max, dim_cap)?;
    let (omega0, gamma, lambda) = (params.omega0(), params.gamma(), params.lambda());
    let mut mat = Mat::<f64>::zeros(dim, dim);
    for s in 0..2usize {
        let tz = if s == 1 { 1.0 } else { -1.0 };
        for n in 0..modes {
            let i = s * modes + n;
            mat[(i, i)] = omega0 * n as f64;
            // τˣ: spin flip at fixed occupation.
            let flip = (1 - s) * modes + n;
            mat[(i, flip)] = gamma;
            if n + 1 < modes {
                let j = s * modes + n + 1;
                let v = lambda * tz * ((n + 1) as f64).sqrt();
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
    }
    Ok(FockHamiltonian {
        basis: SectorBasis::Even,
        fock_max,
        mat,
    })
}

/// Builds the odd sector H = ω₀a†a + ετᶻ + γτˣ with τᶻ = −1 on |↓↑⟩ (s = 0),
/// +1 on |↑↓⟩. The qubit-mode coupling vanishes identically here.
pub fn build_odd_sector(
    params: &MediumParams,
    fock_max: usize,
    dim_cap: usize,
) -> Result<FockHamiltonian> {
    let modes = fock_max + 1;
    let dim = check_dims(2, fock_max, dim_cap)?;
    let (omega0, epsilon, gamma) = (params.omega0(), params.epsilon(), params.gamma());
    let mut mat = Mat::<f64>::zeros(dim, dim);
    for s in 0..2usize {
        let tz = if s == 1 { 1.0 } else { -1.0 };
        for n in 0..modes {
            let i = s * modes + n;
            mat[(i, i)] = omega0 * n as f64 + epsilon * tz;
            mat[(i, (1 - s) * modes + n)] = gamma;
        }
    }
    Ok(FockHamiltonian {
        basis: SectorBasis::Odd,
        fock_max,
        mat,
    })
}

/// Builds the full two-qubit model
/// H = ω₀a†a + (ε/2)(σ₁ᶻ − σ₂ᶻ) + γσ₁ˣσ₂ˣ + (λ/2)(σ₁ᶻ + σ₂ᶻ)(a†+a).
pub fn build_full_two_qubit(
    params: &MediumParams,
    fock_max: usize,
    dim_cap: usize,
) -> Result<FockHamiltonian> {
    let modes = fock_max + 1;
    let dim = check_dims(4, fock_max, dim_cap)?;
    let (omega0, epsilon, gamma, lambda) = (
        params.omega0(),
        params.epsilon(),
        params.gamma(),
        params.lambda(),
    );
    let mut mat = Mat::<f64>::zeros(dim, dim);
    for q in 0..4usize {
        let s1 = if q & 2 != 0 { 1.0 } else { -1.0 };
        let s2 = if q & 1 != 0 { 1.0 } else { -1.0 };
        let bias = 0.5 * epsilon * (s1 - s2);
        let disp = 0.5 * lambda * (s1 + s2);
        // σ₁ˣσ₂ˣ flips both qubits: ↓↓ ↔ ↑↑ and ↓↑ ↔ ↑↓.
        let qflip = q ^ 3;
        for n in 0..modes {
            let i = q * modes + n;
            mat[(i, i)] = omega0 * n as f64 + bias;
            mat[(i, qflip * modes + n)] = gamma;
            if n + 1 < modes && disp != 0.0 {
                let j = q * modes + n + 1;
                let v = disp * ((n + 1) as f64).sqrt();
                mat[(i, j)] = v;
                mat[(j, i)] = v;
            }
        }
    }
    Ok(FockHamiltonian {
        basis: SectorBasis::FullTwoQubit,
        fock_max,
        mat,
    })
}

/// Force sequential eigensolves: results must not depend on how many worker
/// threads happen to exist, and parallelism is applied at the sweep level
/// instead.
fn sequential_solver() {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        faer::set_global_parallelism(faer::Par::Seq);
    });
}

/// All eigenvalues of a built Hamiltonian, ascending.
pub fn eigenvalues(h: &FockHamiltonian) -> Result<Vec<f64>> {
    sequential_solver();
    h.mat
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|_| Error::Eigensolver { dim: h.dim() })
}

/// All eigenvalues (ascending) and the matching orthonormal eigenvectors
/// (as matrix columns).
pub fn eigenpairs(h: &FockHamiltonian) -> Result<(Vec<f64>, Mat<f64>)> {
    sequential_solver();
    let evd = h
        .mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|_| Error::Eigensolver { dim: h.dim() })?;
    let dim = h.dim();
    let s = evd.S();
    let values: Vec<f64> = (0..dim).map(|i| s[i]).collect();
    Ok((values, evd.U().to_owned()))
}

/// Settings for [`converged_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceSettings {
    /// Number of low eigenvalues to track and return.
    pub levels: usize,
    /// Absolute tolerance on the tracked eigenvalues between successive
    /// doublings (same energy units as the Hamiltonian).
    pub tol: f64,
    /// Initial Fock cutoff.
    pub fock_start: usize,
    /// Hard cap on the matrix dimension while doubling.
    pub dim_cap: usize,
}

impl Default for ConvergenceSettings {
    fn default() -> Self {
        Self {
            levels: 3,
            tol: DEFAULT_REL_TOL,
            fock_start: DEFAULT_FOCK_START,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }
}

/// A spectrum whose tracked low levels are stable under Fock-cutoff doubling.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedSpectrum {
    /// The tracked low eigenvalues, ascending.
    pub levels: Vec<f64>,
    /// The cutoff at which convergence was established.
    pub fock_max: usize,
    /// Matrix dimension at that cutoff.
    pub dim: usize,
    /// Largest movement of a tracked level over the final doubling.
    pub achieved_tol: f64,
}

/// Diagonalizes the rotated even sector, doubling the Fock cutoff from
/// `fock_start` until the lowest `levels` eigenvalues move by less than
/// `tol`, or the dimension cap is hit (then [`Error::SpectrumCap`]).
pub fn converged_spectrum(
    params: &MediumParams,
    settings: &ConvergenceSettings,
) -> Result<ConvergedSpectrum> {
    require_positive("tol", settings.tol)?;
    let k = settings.levels.max(1);
    // Ensure the first matrix is large enough to track k levels.
    let start = settings.fock_start.max(k / 2 + 1).max(1);
    let solve = |n: usize| -> Result<Vec<f64>> {
        eigenvalues(&build_rotated_even(params, n, settings.dim_cap)?)
    };
    let mut fock = start;
    let mut prev = solve(fock)?;
    let mut achieved = f64::INFINITY;
    loop {
        let next = fock * 2;
        let cur = match solve(next) {
            Ok(levels) => levels,
            Err(Error::Size { .. }) => {
                return Err(Error::SpectrumCap {
                    fock_max: fock,
                    achieved,
                    requested: settings.tol,
                });
            }
            Err(e) => return Err(e),
        };
        achieved = (0..k)
            .map(|i| (cur[i] - prev[i]).abs())
            .fold(0.0f64, f64::max);
        if achieved <= settings.tol {
            let dim = cur.len();
            let mut levels = cur;
            levels.truncate(k);
            return Ok(ConvergedSpectrum {
                levels,
                fock_max: next,
                dim,
                achieved_tol: achieved,
            });
        }
        prev = cur;
        fock = next;
    }
}

/// The excitation gap of a converged spectrum, interpreted per phase: in the
/// normal phase the first excited level, in the superradiant phase the
/// second (the first is the asymptotically degenerate ground-state partner).
pub fn exact_gap(spectrum: &ConvergedSpectrum, phase: Phase) -> Result<f64> {
    let needed = match phase {
        Phase::Normal => 2,
        Phase::Superradiant => 3,
    };
    if spectrum.levels.len() < needed {
        return Err(Error::domain(format!(
            "need at least {needed} tracked levels to extract the gap, got {}",
            spectrum.levels.len()
        )));
    }
    Ok(match phase {
        Phase::Normal => spectrum.levels[1] - spectrum.levels[0],
        Phase::Superradiant => spectrum.levels[2] - spectrum.levels[0],
    })
}

/// One row of an effective-vs-exact gap comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapComparison {
    pub zeta: f64,
    pub g: f64,
    /// Fock cutoff at which the exact spectrum converged.
    pub fock_max: usize,
    pub gap_exact: f64,
    pub gap_effective: f64,
    /// |gap_exact − gap_effective| / gap_exact.
    pub rel_error: f64,
    /// Ground-pair splitting (superradiant phase only, else 0): should be
    /// exponentially small when the two-fold degeneracy is genuine.
    pub ground_splitting: f64,
}

/// Minimum distance from the critical coupling accepted by the validators:
/// closer in, the finite-size gap is dominated by critical fluctuations and
/// the comparison is meaningless.
pub const VALIDATION_MIN_CRITICAL_DISTANCE: f64 = 0.05;

/// Compares the exact excitation gap against the closed-form effective one
/// at a single (ζ, g) point.
pub fn compare_gaps(
    omega0: f64,
    epsilon: f64,
    zeta: f64,
    g: f64,
    settings: &ConvergenceSettings,
) -> Result<GapComparison> {
    require_positive("omega0", omega0)?;
    require_positive("zeta", zeta)?;
    if (g - 1.0).abs() < VALIDATION_MIN_CRITICAL_DISTANCE {
        return Err(Error::domain(format!(
            "validation requires |g − 1| ≥ {VALIDATION_MIN_CRITICAL_DISTANCE}, got g = {g}"
        )));
    }
    let gamma = zeta * omega0;
    let lambda = crate::medium::lambda_for_g(g, omega0, gamma)?;
    let params = MediumParams::new(omega0, epsilon, gamma, lambda)?;
    let effective = crate::medium::effective_spectrum_for_g(
        g,
        omega0,
        gamma,
        crate::medium::DEFAULT_CRITICAL_TOL,
    )?;
    let mut settings = *settings;
    settings.levels = settings.levels.max(3);
    let conv = converged_spectrum(&params, &settings)?;
    let gap_exact = exact_gap(&conv, effective.phase)?;
    let ground_splitting = match effective.phase {
        Phase::Normal => 0.0,
        Phase::Superradiant => conv.levels[1] - conv.levels[0],
    };
    Ok(GapComparison {
        zeta,
        g,
        fock_max: conv.fock_max,
        gap_exact,
        gap_effective: effective.gap,
        rel_error: (gap_exact - effective.gap).abs() / gap_exact,
        ground_splitting,
    })
}

/// Runs [`compare_gaps`] over a list of (ζ, g) points.
pub fn validate_grid(
    omega0: f64,
    epsilon: f64,
    points: &[(f64, f64)],
    settings: &ConvergenceSettings,
) -> Result<Vec<GapComparison>> {
    points
        .iter()
        .map(|&(zeta, g)| compare_gaps(omega0, epsilon, zeta, g, settings))
        .collect()
}
