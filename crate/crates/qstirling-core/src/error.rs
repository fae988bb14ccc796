//! Error types shared across the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building spectra, thermodynamic states,
/// cycles, or sweeps.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain (non-positive
    /// temperature, negative frequency, non-finite input, ...).
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// The requested effective coupling sits inside the exclusion window
    /// around the quantum phase transition at g = 1, where the effective
    /// description has no gap.
    #[error(
        "effective coupling g = {g} lies within {tol:e} of the critical point g = 1; \
         the effective spectrum is undefined there"
    )]
    CriticalPoint { g: f64, tol: f64 },

    /// Both isochores of a quantum Stirling cycle sit at the same coupling, so the
    /// cycle encloses no area.
    #[error("degenerate cycle: the two isochore couplings coincide (g1 = g2 = {g})")]
    DegenerateCycle { g: f64 },

    /// A requested Fock-space truncation would exceed the configured
    /// matrix-dimension cap.
    #[error("matrix dimension {dim} would exceed the configured cap of {cap}")]
    Size { dim: usize, cap: usize },

    /// The eigensolver did not converge.
    #[error("eigensolver failed to converge for a {dim}x{dim} matrix")]
    Eigensolver { dim: usize },

    /// Fock-space doubling hit the dimension cap before the tracked
    /// eigenvalues stabilized to the requested tolerance.
    #[error(
        "spectrum not converged at the Fock cap (fock_max = {fock_max}): \
         achieved tolerance {achieved:e}, requested {requested:e}"
    )]
    SpectrumCap {
        fock_max: usize,
        achieved: f64,
        requested: f64,
    },

    /// Adaptive quadrature hit its recursion-depth limit before reaching the
    /// requested tolerance.
    #[error("adaptive quadrature exceeded maximum recursion depth {max_depth}")]
    QuadratureDepth { max_depth: u32 },
}

impl Error {
    /// Convenience constructor for domain errors.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Checks that a named value is finite, returning a domain error otherwise.
pub(crate) fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be finite, got {value}")))
    }
}

/// Checks that a named value is finite and strictly positive.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be > 0, got {value}")))
    }
}

/// Checks that a named value is finite and non-negative.
pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<()> {
    require_finite(name, value)?;
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} must be >= 0, got {value}")))
    }
}
