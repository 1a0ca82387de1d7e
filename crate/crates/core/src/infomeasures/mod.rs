//! Entropies, correlations and the measurement channel. All values in nats.

mod discord;
mod measurement;
mod oracle;

pub use discord::{
    analyze_correlations, classical_correlation, conditional_entropy_along, discord, discord_along,
    CorrelationAnalysis, DEFAULT_GRID_N, MIN_GRID_N,
};
pub use measurement::{
    measure_subsystem, qc_mutual_information, qubit_basis, BlochAngles, MeasurementRecord,
    ProjectiveMeasurement, MEASUREMENT_TOL, MIN_OUTCOME_PROBABILITY,
};
pub use oracle::discord_oracle;

use crate::densmat::{partial_trace, DensityMatrix, SubsystemLayout};
use crate::error::{Error, Result};

/// Eigenvalues at or below this are treated as zero in λ ln λ.
pub const ENTROPY_FLOOR: f64 = 1e-12;

/// -Σ λ ln λ over a spectrum, with λ ln λ := 0 for λ ≤ [`ENTROPY_FLOOR`].
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&v| v > ENTROPY_FLOOR).map(|&v| -v * v.ln()).sum()
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub(crate) fn check_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidDistribution("empty distribution".into()));
    }
    if let Some(x) = p.iter().find(|x| !(**x >= 0.0)) {
        return Err(Error::InvalidDistribution(format!("entry {x} is negative or not a number")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

/// Shannon entropy -Σ p ln p, with 0 ln 0 := 0.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum())
}

/// I(A:B) = S(A) + S(B) - S(AB) for a two-factor layout.
pub fn mutual_information(rho_ab: &DensityMatrix, layout: &SubsystemLayout) -> Result<f64> {
    let (a, b) = bipartite_labels(layout)?;
    layout.check_dim(rho_ab.dim(), "state")?;
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, layout, &[a])?);
    let s_b = von_neumann_entropy(&partial_trace(rho_ab, layout, &[b])?);
    Ok(s_a + s_b - von_neumann_entropy(rho_ab))
}

/// Relative-entropy cross term -tr(ρ ln σ). Infinite when supp ρ ⊄ supp σ.
pub fn cross_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch("states differ in dimension".into()));
    }
    let eig = crate::densmat::eig_hermitian(sigma.matrix())?;
    let mut acc = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        // ⟨v_k|ρ|v_k⟩
        let mut w = 0.0;
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                w += (eig.vectors.get(i, k).conj() * rho.matrix().get(i, j) * eig.vectors.get(j, k)).re;
            }
        }
        if lambda > ENTROPY_FLOOR {
            acc -= w * lambda.ln();
        } else if w > ENTROPY_FLOOR {
            return Ok(f64::INFINITY);
        }
    }
    Ok(acc)
}

pub(crate) fn bipartite_labels(layout: &SubsystemLayout) -> Result<(&str, &str)> {
    if layout.len() != 2 {
        return Err(Error::InvalidLayout(format!("expected two factors, got {}", layout.len())));
    }
    let f = layout.factors();
    Ok((f[0].label.as_str(), f[1].label.as_str()))
}

#[cfg(test)]
mod tests;
