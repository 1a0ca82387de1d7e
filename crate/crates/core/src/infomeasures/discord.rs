//! Classical correlation J(B:A) and discord δ(B|A) for a qubit A.
//!
//! Both quantities come from one minimization of the measured conditional
//! entropy Σ_k p_k S(ρ_B^k) over rank-1 projective measurements on A,
//! parametrized by a Bloch direction. The minimizer scans a θ–φ grid and then
//! polishes the best grid minima with a Nelder–Mead simplex.

use std::f64::consts::PI;

use super::measurement::{qubit_basis, BlochAngles, MIN_OUTCOME_PROBABILITY};
use super::{bipartite_labels, entropy_of_spectrum, von_neumann_entropy};
use crate::densmat::{eig_hermitian, partial_trace, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::error::{Error, Result};

pub const DEFAULT_GRID_N: usize = 32;
pub const MIN_GRID_N: usize = 8;

const REFINE_STARTS: usize = 3;
const REFINE_MAX_ITER: usize = 2000;
const REFINE_FTOL: f64 = 1e-12;
const REFINE_XTOL: f64 = 1e-9;
const CLIP_BAND: f64 = 1e-9;

/// Everything derived from one conditional-entropy minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationAnalysis {
    pub mutual_information: f64,
    pub classical_correlation: f64,
    pub discord: f64,
    pub min_conditional_entropy: f64,
    /// Optimal measurement direction on A.
    pub angles: BlochAngles,
}

/// Σ_k p_k S(ρ_B^k) as a function of the measurement direction on A.
pub(crate) struct ConditionalEntropy {
    d_b: usize,
    // blocks[a][a'] = ⟨a|ρ_AB|a'⟩, a d_B × d_B matrix
    blocks: [[ComplexMatrix; 2]; 2],
}

impl ConditionalEntropy {
    pub(crate) fn new(rho_ab: &DensityMatrix, layout: &SubsystemLayout) -> Result<Self> {
        bipartite_labels(layout)?;
        layout.check_dim(rho_ab.dim(), "state")?;
        let dims = layout.dims();
        if dims[0] != 2 {
            return Err(Error::NotQubit(dims[0]));
        }
        let d_b = dims[1];
        let m = rho_ab.matrix();
        let block = |a: usize, ap: usize| ComplexMatrix::from_fn(d_b, d_b, |i, j| m.get(a * d_b + i, ap * d_b + j));
        Ok(Self { d_b, blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]] })
    }

    pub(crate) fn eval(&self, theta: f64, phi: f64) -> f64 {
        let mut total = 0.0;
        for ket in qubit_basis(theta, phi) {
            let mut sigma = ComplexMatrix::zeros(self.d_b, self.d_b);
            for a in 0..2 {
                for ap in 0..2 {
                    let w = ket[a].conj() * ket[ap];
                    sigma = &sigma + &self.blocks[a][ap].scale_complex(w);
                }
            }
            let p = sigma.trace().re;
            if p <= MIN_OUTCOME_PROBABILITY {
                continue;
            }
            let spectrum: Vec<f64> = eig_hermitian(&sigma.hermitian_part())
                .expect("conditional state is Hermitian")
                .values
                .into_iter()
                .map(|v| v / p)
                .collect();
            total += p * entropy_of_spectrum(&spectrum);
        }
        total
    }
}

fn grid_point(grid_n: usize, i: usize, j: usize) -> (f64, f64) {
    (PI * i as f64 / (grid_n - 1) as f64, 2.0 * PI * j as f64 / grid_n as f64)
}

fn check_grid(grid_n: usize) -> Result<()> {
    if grid_n < MIN_GRID_N {
        return Err(Error::InvalidParameter(format!("grid_n = {grid_n}, need at least {MIN_GRID_N}")));
    }
    Ok(())
}

/// Grid scan followed by simplex refinement from the best grid minima.
fn minimize(f: &ConditionalEntropy, grid_n: usize) -> (f64, BlochAngles) {
    let mut values = vec![0.0; grid_n * grid_n];
    for i in 0..grid_n {
        for j in 0..grid_n {
            let (t, p) = grid_point(grid_n, i, j);
            values[i * grid_n + j] = f.eval(t, p);
        }
    }
    let at = |i: usize, j: usize| values[i * grid_n + j];

    // Discrete local minima (φ periodic, θ clamped), ordered by value then (θ, φ).
    let mut starts: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..grid_n {
        for j in 0..grid_n {
            let v = at(i, j);
            let left = at(i, (j + grid_n - 1) % grid_n);
            let right = at(i, (j + 1) % grid_n);
            let up = if i > 0 { at(i - 1, j) } else { f64::INFINITY };
            let down = if i + 1 < grid_n { at(i + 1, j) } else { f64::INFINITY };
            if v <= left && v <= right && v <= up && v <= down {
                starts.push((v, i, j));
            }
        }
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    starts.truncate(REFINE_STARTS);

    let step = (PI / (grid_n - 1) as f64 * 0.5, PI / grid_n as f64);
    let mut best: Option<(f64, f64, f64)> = None;
    for &(v0, i, j) in &starts {
        let (t0, p0) = grid_point(grid_n, i, j);
        let (v, t, p) = nelder_mead(|t, p| f.eval(t, p), (t0, p0), v0, step);
        if best.is_none_or(|b| v < b.0) {
            best = Some((v, t, p));
        }
    }
    let (v, t, p) = best.expect("grid has at least one minimum");
    (v, BlochAngles::new(t, p))
}

/// Two-dimensional Nelder–Mead. Never returns a value worse than the start.
fn nelder_mead(f: impl Fn(f64, f64) -> f64, x0: (f64, f64), f0: f64, step: (f64, f64)) -> (f64, f64, f64) {
    let mut simplex = [
        (f0, x0.0, x0.1),
        (0.0, x0.0 + step.0, x0.1),
        (0.0, x0.0, x0.1 + step.1),
    ];
    for v in simplex.iter_mut().skip(1) {
        v.0 = f(v.1, v.2);
    }
    for _ in 0..REFINE_MAX_ITER {
        // Stable sort keeps the earlier vertex first on ties.
        simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (lo, hi) = (simplex[0], simplex[2]);
        let diameter = simplex
            .iter()
            .map(|v| ((v.1 - lo.1).powi(2) + (v.2 - lo.2).powi(2)).sqrt())
            .fold(0.0, f64::max);
        if (hi.0 - lo.0).abs() <= REFINE_FTOL && diameter <= 1e-6 || diameter <= REFINE_XTOL {
            break;
        }
        let centroid = ((simplex[0].1 + simplex[1].1) * 0.5, (simplex[0].2 + simplex[1].2) * 0.5);
        let toward = |t: f64| (centroid.0 + t * (hi.1 - centroid.0), centroid.1 + t * (hi.2 - centroid.1));
        let r = toward(-1.0);
        let fr = f(r.0, r.1);
        if fr < simplex[0].0 {
            let e = toward(-2.0);
            let fe = f(e.0, e.1);
            simplex[2] = if fe < fr { (fe, e.0, e.1) } else { (fr, r.0, r.1) };
        } else if fr < simplex[1].0 {
            simplex[2] = (fr, r.0, r.1);
        } else {
            let k = if fr < hi.0 { toward(-0.5) } else { toward(0.5) };
            let fk = f(k.0, k.1);
            if fk < hi.0.min(fr) {
                simplex[2] = (fk, k.0, k.1);
            } else {
                for v in simplex.iter_mut().skip(1) {
                    v.1 = lo.1 + 0.5 * (v.1 - lo.1);
                    v.2 = lo.2 + 0.5 * (v.2 - lo.2);
                    v.0 = f(v.1, v.2);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.0.total_cmp(&b.0));
    simplex[0]
}

fn clip(v: f64) -> f64 {
    if (-CLIP_BAND..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// Mutual information, J(B:A) and δ(B|A) from a single minimization.
///
/// The first factor of `layout` is the measured qubit A.
pub fn analyze_correlations(rho_ab: &DensityMatrix, layout: &SubsystemLayout, grid_n: usize) -> Result<CorrelationAnalysis> {
    check_grid(grid_n)?;
    let objective = ConditionalEntropy::new(rho_ab, layout)?;
    let (a, b) = bipartite_labels(layout)?;
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, layout, &[a])?);
    let s_b = von_neumann_entropy(&partial_trace(rho_ab, layout, &[b])?);
    let s_ab = von_neumann_entropy(rho_ab);
    let (min_cond, angles) = minimize(&objective, grid_n);
    Ok(CorrelationAnalysis {
        mutual_information: s_a + s_b - s_ab,
        classical_correlation: s_b - min_cond,
        discord: clip(s_a - s_ab + min_cond),
        min_conditional_entropy: min_cond,
        angles,
    })
}

/// J(B:A) = S(ρ_B) - min Σ_k p_k S(ρ_B^k), with the maximizing direction.
pub fn classical_correlation(rho_ab: &DensityMatrix, layout: &SubsystemLayout, grid_n: usize) -> Result<(f64, BlochAngles)> {
    let r = analyze_correlations(rho_ab, layout, grid_n)?;
    Ok((r.classical_correlation, r.angles))
}

/// δ(B|A) = S(ρ_A) - S(ρ_AB) + min Σ_k p_k S(ρ_B^k), with the minimizing direction.
pub fn discord(rho_ab: &DensityMatrix, layout: &SubsystemLayout, grid_n: usize) -> Result<(f64, BlochAngles)> {
    let r = analyze_correlations(rho_ab, layout, grid_n)?;
    Ok((r.discord, r.angles))
}

/// Σ_k p_k S(ρ_B^k) for a fixed measurement direction on A.
pub fn conditional_entropy_along(rho_ab: &DensityMatrix, layout: &SubsystemLayout, angles: BlochAngles) -> Result<f64> {
    Ok(ConditionalEntropy::new(rho_ab, layout)?.eval(angles.theta, angles.phi))
}

/// I(A:B) - J̃(B:A) for a fixed measurement direction; an upper bound on δ(B|A).
pub fn discord_along(rho_ab: &DensityMatrix, layout: &SubsystemLayout, angles: BlochAngles) -> Result<f64> {
    let cond = conditional_entropy_along(rho_ab, layout, angles)?;
    let (a, _) = bipartite_labels(layout)?;
    let s_a = von_neumann_entropy(&partial_trace(rho_ab, layout, &[a])?);
    Ok(clip(s_a - von_neumann_entropy(rho_ab) + cond))
}

