//! Exactly solvable quantum model of an interferometric gravitational-wave
//! detector.
//!
//! A laser in a coherent state drives a mirror modelled as a quantum
//! harmonic oscillator; the mirror also feels the classical force of a
//! gravitational wave. The crate provides
//!
//! - [`model`]: parameters, couplings and the phase integrals of the
//!   driven oscillator,
//! - [`closedform`]: mean, second moment and dispersion of the output
//!   signal for ground-state and thermal mirrors,
//! - [`oracle`]: a truncated Fock-space simulation that checks the closed
//!   forms at rescaled parameters,
//! - [`sensitivity`]: the standard quantum limit and its temperature
//!   dependence.

pub mod closedform;
pub mod model;
pub mod oracle;
pub mod quadrature;
pub mod sensitivity;

pub use closedform::{PhotonAverage, SignalInputs, SignalStats, ThermalSpec};
pub use model::{DerivedCouplings, DetectorParams, Dynamics, ModelError, PhaseState};
pub use oracle::{DeskProfile, OracleConfig, OracleError, VerificationReport};
pub use sensitivity::{SensitivityError, SqlMethod, SqlResult, SweepGrid, ThermalNoise};
