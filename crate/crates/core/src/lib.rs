//! Measurement-feedback quantum heat engine on finite-dimensional density matrices.
//!
//! The crate is split into:
//!
//! - [`densmat`]: validated density matrices, layouts, partial traces, Gibbs states.
//! - [`infomeasures`]: entropies, projective measurement, classical correlation,
//!   discord (refined minimizer plus a brute-force oracle), QC mutual information.
//! - [`protocol`]: the four-stage engine, energy/heat/work ledger and bound checks,
//!   and the JSON protocol document format.
//! - [`szilard`]: the entangled-memory Szilard engine with semi-permeable walls.
//! - [`random`]: seeded generators used by the verification sweeps.

pub mod densmat;
pub mod error;
pub mod infomeasures;
pub mod properties;
pub mod protocol;
pub mod random;
pub mod szilard;

pub use densmat::{ComplexMatrix, DensityMatrix, Factor, Hamiltonian, HamiltonianRole, SubsystemLayout};
pub use error::{Error, Result};
pub use infomeasures::{BlochAngles, MeasurementRecord, ProjectiveMeasurement};
pub use protocol::{BathMode, BoundEntry, BoundReport, Protocol, ProtocolState, StageSpec, ThermoLedger};
pub use szilard::{SzilardReport, SzilardScenario};
