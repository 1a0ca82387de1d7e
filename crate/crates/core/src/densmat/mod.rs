//! Dense complex linear algebra over labeled tensor-product spaces.
//!
//! Basis ordering follows the row-major Kronecker convention: the leftmost
//! factor of a [`SubsystemLayout`] is the most significant digit of a basis
//! index. Every operation in the crate uses this convention.

mod layout;
mod matrix;
mod ops;
mod state;

pub use layout::{Factor, SubsystemLayout};
pub use matrix::{c, ComplexMatrix};
pub use ops::{
    apply_unitary, eig_hermitian, embed_local, embed_operator, partial_trace, reorder, tensor,
    thermal_state, Eigen,
};
pub use state::{DensityMatrix, Hamiltonian, HamiltonianRole};

/// Absolute tolerance for Hermiticity, trace and positivity checks.
pub const VALIDATION_TOL: f64 = 1e-10;

/// Tolerance used when checking unitarity of composed or embedded operators.
pub const UNITARY_TOL: f64 = 1e-9;
