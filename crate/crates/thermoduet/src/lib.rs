//! Exact second-moment dynamics of two coupled sets of bosonic modes and the
//! thermodynamic bookkeeping of weak-coupling, interaction, bare and
//! minimal-dissipation definitions of internal energy, heat and work.

pub mod analytic;
pub mod error;
pub mod fock;
pub mod linalg;
pub mod model;
pub mod propagator;
pub mod quadrature;
pub mod reduced;
pub mod spectral;
pub mod thermo;

pub use error::{Error, Result};
pub use model::{
    build_hamiltonian, classify_regime, sample_frequencies, HamiltonianMatrix, ModelParams, RegimeReport, Subsystem,
};
pub use propagator::Propagator;
pub use thermo::{Approach, ThermoTrajectory, TimeGrid};
