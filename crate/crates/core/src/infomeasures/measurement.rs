use std::f64::consts::PI;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use super::von_neumann_entropy;
use crate::densmat::{c, embed_local, partial_trace, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::error::{Error, Result};

/// Tolerance for projector idempotence, orthogonality and completeness.
pub const MEASUREMENT_TOL: f64 = 1e-9;

/// Outcomes at or below this probability carry no conditional state.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-12;

/// Direction on the Bloch sphere, θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    /// Maps arbitrary real angles onto the canonical range without changing the direction.
    pub fn new(theta: f64, phi: f64) -> Self {
        let two_pi = 2.0 * PI;
        let mut theta = theta.rem_euclid(two_pi);
        let mut phi = phi;
        if theta > PI {
            theta = two_pi - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(two_pi);
        if phi >= two_pi {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn z_axis() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    /// Orthonormal kets (|+n⟩, |-n⟩) along this direction.
    pub fn kets(&self) -> [[Complex<f64>; 2]; 2] {
        qubit_basis(self.theta, self.phi)
    }
}

/// The eigenbasis of n·σ for n = (sin θ cos φ, sin θ sin φ, cos θ).
pub fn qubit_basis(theta: f64, phi: f64) -> [[Complex<f64>; 2]; 2] {
    let (s, co) = (0.5 * theta).sin_cos();
    let e = Complex::from_polar(1.0, phi);
    [[c(co, 0.0), e * s], [c(s, 0.0), -e * co]]
}

/// Complete set of rank-1 orthogonal projectors on one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    layout: SubsystemLayout,
    target: String,
    projectors: Vec<ComplexMatrix>,
}

impl ProjectiveMeasurement {
    pub fn new(layout: SubsystemLayout, target: &str, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let d = layout.dim_of(target)?;
        if projectors.len() != d {
            return Err(Error::InvalidMeasurement(format!(
                "{} projectors for a factor of dimension {d}; rank-1 sets need exactly {d}",
                projectors.len()
            )));
        }
        let id = ComplexMatrix::identity(d);
        let mut sum = ComplexMatrix::zeros(d, d);
        for (k, p) in projectors.iter().enumerate() {
            if p.rows() != d || p.cols() != d {
                return Err(Error::InvalidMeasurement(format!("projector {k} is not {d}x{d}")));
            }
            if !p.is_hermitian(MEASUREMENT_TOL) {
                return Err(Error::InvalidMeasurement(format!("projector {k} is not Hermitian")));
            }
            if p.matmul(p).max_abs_diff(p) > MEASUREMENT_TOL {
                return Err(Error::InvalidMeasurement(format!("projector {k} is not idempotent")));
            }
            if (p.trace().re - 1.0).abs() > MEASUREMENT_TOL {
                return Err(Error::InvalidMeasurement(format!("projector {k} is not rank 1")));
            }
            for (j, q) in projectors[..k].iter().enumerate() {
                if p.matmul(q).max_abs() > MEASUREMENT_TOL {
                    return Err(Error::InvalidMeasurement(format!("projectors {j} and {k} are not orthogonal")));
                }
            }
            sum = &sum + p;
        }
        if sum.max_abs_diff(&id) > MEASUREMENT_TOL {
            return Err(Error::InvalidMeasurement("projectors do not sum to the identity".into()));
        }
        Ok(Self { layout, target: target.to_owned(), projectors })
    }

    /// Measurement in the computational basis of `target`.
    pub fn computational(layout: SubsystemLayout, target: &str) -> Result<Self> {
        let d = layout.dim_of(target)?;
        let projectors = (0..d)
            .map(|k| ComplexMatrix::from_fn(d, d, |i, j| if i == k && j == k { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
        Self::new(layout, target, projectors)
    }

    /// Qubit measurement along a Bloch direction; outcome 0 is |+n⟩.
    pub fn along(layout: SubsystemLayout, target: &str, angles: BlochAngles) -> Result<Self> {
        let d = layout.dim_of(target)?;
        if d != 2 {
            return Err(Error::NotQubit(d));
        }
        let projectors = angles.kets().iter().map(|k| ComplexMatrix::projector(k)).collect();
        Self::new(layout, target, projectors)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn outcomes(&self) -> usize {
        self.projectors.len()
    }
}

/// Result of a non-selective projective measurement on one factor.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub target: String,
    pub probabilities: Vec<f64>,
    /// Normalized states of the unmeasured factors, `None` for negligible outcomes.
    pub conditional_states: Vec<Option<DensityMatrix>>,
    /// Layout of the conditional states (the measured factor removed).
    pub conditional_layout: SubsystemLayout,
    /// Σ_k (Π_k ⊗ I) ρ (Π_k ⊗ I).
    pub post_state: DensityMatrix,
}

pub fn measure_subsystem(rho: &DensityMatrix, meas: &ProjectiveMeasurement) -> Result<MeasurementRecord> {
    let layout = meas.layout();
    layout.check_dim(rho.dim(), "state")?;
    if layout.len() < 2 {
        return Err(Error::InvalidMeasurement("measured factor must leave at least one other factor".into()));
    }
    let rest = layout.without(&[meas.target()])?;
    let rest_labels: Vec<&str> = rest.labels().collect();
    let d = rho.dim();
    let mut post = ComplexMatrix::zeros(d, d);
    let mut probabilities = Vec::with_capacity(meas.outcomes());
    let mut conditional_states = Vec::with_capacity(meas.outcomes());
    for p in meas.projectors() {
        let lifted = embed_local(p, layout, meas.target())?;
        let branch = lifted.matmul(rho.matrix()).matmul(&lifted);
        let prob = branch.trace().re.max(0.0);
        post = &post + &branch;
        probabilities.push(prob);
        if prob > MIN_OUTCOME_PROBABILITY {
            let normalized = DensityMatrix::from_matrix_unchecked(branch.scale(1.0 / prob));
            conditional_states.push(Some(partial_trace(&normalized, layout, &rest_labels)?));
        } else {
            conditional_states.push(None);
        }
    }
    Ok(MeasurementRecord {
        target: meas.target().to_owned(),
        probabilities,
        conditional_states,
        conditional_layout: rest,
        post_state: DensityMatrix::from_matrix_unchecked(post),
    })
}

/// S(ρ_S) - Σ_k q_k S(σ_S^k), where σ_S^k is the `system` marginal of each
/// conditional state in `record`.
pub fn qc_mutual_information(rho_s_initial: &DensityMatrix, record: &MeasurementRecord, system: &str) -> Result<f64> {
    let d_s = record.conditional_layout.dim_of(system)?;
    if d_s != rho_s_initial.dim() {
        return Err(Error::DimensionMismatch(format!(
            "initial system state has dimension {}, record's `{system}` has {d_s}",
            rho_s_initial.dim()
        )));
    }
    let mut conditional = 0.0;
    for (q, state) in record.probabilities.iter().zip(&record.conditional_states) {
        if let Some(state) = state {
            let marginal = partial_trace(state, &record.conditional_layout, &[system])?;
            conditional += q * von_neumann_entropy(&marginal);
        }
    }
    Ok(von_neumann_entropy(rho_s_initial) - conditional)
}
