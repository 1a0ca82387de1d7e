use serde::{Deserialize, Serialize};

use super::matrix::{c, ComplexMatrix};
use super::ops::eig_hermitian;
use super::{SubsystemLayout, VALIDATION_TOL};
use crate::error::{Error, Result};

/// A validated quantum state: Hermitian, unit trace, positive semidefinite.
///
/// Validation runs once at construction. Operations that provably preserve
/// the invariants (unitary conjugation, partial trace, dephasing) build their
/// outputs through an internal unchecked path.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix(format!(
                "matrix is {}x{}, not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_defect();
        if herm > VALIDATION_TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > VALIDATION_TOL || tr.im.abs() > VALIDATION_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {}{:+}i, not 1", tr.re, tr.im)));
        }
        let matrix = matrix.hermitian_part();
        let min = eig_hermitian(&matrix)?.values[0];
        if min < -VALIDATION_TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix already known to be a state up to rounding.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.is_square());
        Self { matrix: matrix.hermitian_part() }
    }

    /// |ψ⟩⟨ψ| for a ket, normalized here.
    pub fn pure(ket: &[nalgebra::Complex<f64>]) -> Result<Self> {
        let norm2: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        if ket.is_empty() || norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidDensityMatrix("ket has zero or non-finite norm".into()));
        }
        let scale = 1.0 / norm2.sqrt();
        let ket: Vec<_> = ket.iter().map(|z| z * scale).collect();
        Ok(Self::from_matrix_unchecked(ComplexMatrix::projector(&ket)))
    }

    /// Pure state of a real-amplitude ket.
    pub fn pure_real(amplitudes: &[f64]) -> Result<Self> {
        let ket: Vec<_> = amplitudes.iter().map(|&a| c(a, 0.0)).collect();
        Self::pure(&ket)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_matrix_unchecked(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(populations))
    }

    /// Convex combination Σ w_k ρ_k. Weights must be a probability vector.
    pub fn mixture(weights: &[f64], states: &[DensityMatrix]) -> Result<Self> {
        if weights.len() != states.len() || states.is_empty() {
            return Err(Error::DimensionMismatch("weights and states differ in length".into()));
        }
        crate::infomeasures::check_distribution(weights)?;
        let dim = states[0].dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, s) in weights.iter().zip(states) {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch("mixture components differ in dimension".into()));
            }
            acc = &acc + &s.matrix.scale(*w);
        }
        Ok(Self::from_matrix_unchecked(acc))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Ascending eigenvalues, with values in [-tol, 0] clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = eig_hermitian(&self.matrix).expect("density matrix is Hermitian");
        eig.values.into_iter().map(|v| if (-VALIDATION_TOL..0.0).contains(&v) { 0.0 } else { v }).collect()
    }

    /// tr(ρ O) for Hermitian O.
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        self.matrix.trace_product_re(op)
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product_re(&self.matrix)
    }
}

/// Which point of the protocol a Hamiltonian belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianRole {
    Initial,
    Final,
    Constant,
}

/// A Hermitian operator on the factors of `layout`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    layout: SubsystemLayout,
    matrix: ComplexMatrix,
    role: HamiltonianRole,
}

impl Hamiltonian {
    pub fn new(layout: SubsystemLayout, matrix: ComplexMatrix, role: HamiltonianRole) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch("Hamiltonian must be square".into()));
        }
        layout.check_dim(matrix.rows(), "Hamiltonian")?;
        let defect = matrix.hermiticity_defect();
        if defect > VALIDATION_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { layout, matrix: matrix.hermitian_part(), role })
    }

    /// The all-zero (fully degenerate) Hamiltonian.
    pub fn zero(layout: SubsystemLayout, role: HamiltonianRole) -> Self {
        let d = layout.total_dim();
        Self { layout, matrix: ComplexMatrix::zeros(d, d), role }
    }

    pub fn diagonal(layout: SubsystemLayout, energies: &[f64], role: HamiltonianRole) -> Result<Self> {
        Self::new(layout, ComplexMatrix::from_real_diagonal(energies), role)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn role(&self) -> HamiltonianRole {
        self.role
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn with_role(&self, role: HamiltonianRole) -> Self {
        Self { role, ..self.clone() }
    }

    /// ln Z = ln tr exp(-βH), evaluated with a shifted log-sum-exp.
    pub fn log_partition(&self, beta: f64) -> f64 {
        let e = eig_hermitian(&self.matrix).expect("validated Hermitian").values;
        let e0 = e[0];
        let sum: f64 = e.iter().map(|&x| (-beta * (x - e0)).exp()).sum();
        -beta * e0 + sum.ln()
    }

    /// Helmholtz free energy F = -ln Z / β. Requires β > 0.
    pub fn free_energy(&self, beta: f64) -> f64 {
        assert!(beta > 0.0, "free energy needs a finite temperature");
        -self.log_partition(beta) / beta
    }
}
