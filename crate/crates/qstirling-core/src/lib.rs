//! Simulation library for a quantum Stirling heat engine whose working medium
//! is a pair of qubits coupled to a single bosonic mode (a two-qubit Rabi
//! model with an inter-qubit coupling).
//!
//! The crate is organized in layers:
//!
//! - [`medium`]: parameters of the working medium, its phase diagram in the
//!   dispersive limit, and the closed-form low-energy spectrum (a gapped
//!   harmonic tower) on either side of the quantum phase transition.
//! - [`thermo`]: equilibrium thermodynamics of a gapped harmonic tower
//!   (partition function, internal energy, entropy, heat capacity) plus
//!   Gibbs thermodynamics over an explicit list of energy levels.
//! - [`cycle`]: the four-stroke quantum Stirling cycle built from two
//!   isotherms and two isochores, its heats, work, efficiency, and the
//!   near-critical asymptotics of the efficiency.
//! - [`fullmodel`]: numerically exact treatment — sparse-free dense Fock
//!   truncations of the full Hamiltonian and its parity sectors, eigensolves,
//!   convergence in the truncation size, and validation of the effective
//!   gap against the exact one.
//! - [`sweep`]: parameter sweeps producing tabular results (CSV) for the
//!   bundled presets, and the critical-scaling scan of the efficiency.
//!
//! All quantities are in natural units (ħ = k_B = 1); energies and
//! temperatures share the unit of the mode frequency supplied by the caller.

pub mod cycle;
pub mod error;
pub mod fullmodel;
pub mod medium;
pub mod sweep;
pub mod thermo;

pub use cycle::{CycleResult, MediumMode, StirlingCycle};
pub use error::{Error, Result};
pub use medium::{EffectiveSpectrum, MediumParams, Phase};
