//! Randomized inequality suites behind the work bounds.
//!
//! Each suite draws `trials` instances, instance `i` from a generator seeded
//! with `seed + i`, and records the smallest slack seen. A violation is a
//! slack below `-tolerance`.

use rand::Rng;

use crate::densmat::{partial_trace, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::error::Result;
use crate::infomeasures::{
    analyze_correlations, cross_entropy, measure_subsystem, von_neumann_entropy, ProjectiveMeasurement, DEFAULT_GRID_N,
};
use crate::random::{random_distribution, random_state, random_state_with_rank, random_unitary, seeded};

pub const INEQUALITY_TOL: f64 = 1e-9;
pub const DECOMPOSITION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub trials: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub tolerance: f64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

fn run_suite<F>(name: &'static str, trials: usize, seed: u64, tolerance: f64, mut slack: F) -> Result<SuiteResult>
where
    F: FnMut(&mut crate::random::SeededRng) -> Result<f64>,
{
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for i in 0..trials {
        let mut rng = seeded(seed.wrapping_add(i as u64));
        let s = slack(&mut rng)?;
        if !(s >= -tolerance) {
            violations += 1;
        }
        min_slack = min_slack.min(s);
    }
    Ok(SuiteResult { name, trials, violations, min_slack, tolerance })
}

fn pick_dim<R: Rng + ?Sized>(rng: &mut R) -> usize {
    rng.random_range(2..=3)
}

/// Mixed state of random rank, so that pure and rank-deficient cases occur.
fn any_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let rank = rng.random_range(1..=dim);
    random_state_with_rank(rng, dim, rank)
}

fn bipartite<R: Rng + ?Sized>(rng: &mut R) -> Result<SubsystemLayout> {
    let (da, db) = (pick_dim(rng), pick_dim(rng));
    SubsystemLayout::from_pairs(&[("A", da), ("B", db)])
}

/// S(A) + S(B) - S(AB) ≥ 0.
pub fn subadditivity(trials: usize, seed: u64) -> Result<SuiteResult> {
    run_suite("subadditivity", trials, seed, INEQUALITY_TOL, |rng| {
        let layout = bipartite(rng)?;
        let rho = any_state(rng, layout.total_dim());
        let s_a = von_neumann_entropy(&partial_trace(&rho, &layout, &["A"])?);
        let s_b = von_neumann_entropy(&partial_trace(&rho, &layout, &["B"])?);
        Ok(s_a + s_b - von_neumann_entropy(&rho))
    })
}

/// A projective measurement of one factor, with the outcome left unread,
/// cannot lower the entropy.
pub fn measurement_entropy(trials: usize, seed: u64) -> Result<SuiteResult> {
    run_suite("measurement_entropy", trials, seed, INEQUALITY_TOL, |rng| {
        let layout = bipartite(rng)?;
        let rho = any_state(rng, layout.total_dim());
        let da = layout.dim_of("A")?;
        let u = random_unitary(rng, da);
        let projectors = (0..da)
            .map(|k| {
                let col: Vec<_> = (0..da).map(|i| u.get(i, k)).collect();
                ComplexMatrix::projector(&col)
            })
            .collect();
        let meas = ProjectiveMeasurement::new(layout, "A", projectors)?;
        let post = measure_subsystem(&rho, &meas)?.post_state;
        Ok(von_neumann_entropy(&post) - von_neumann_entropy(&rho))
    })
}

/// S(Σ p_k ρ_k) ≥ Σ p_k S(ρ_k).
pub fn concavity(trials: usize, seed: u64) -> Result<SuiteResult> {
    run_suite("concavity", trials, seed, INEQUALITY_TOL, |rng| {
        let dim = rng.random_range(2..=6);
        let n = rng.random_range(2..=4);
        let states: Vec<_> = (0..n).map(|_| any_state(rng, dim)).collect();
        let p = random_distribution(rng, n);
        let mix = DensityMatrix::mixture(&p, &states)?;
        let avg: f64 = p.iter().zip(&states).map(|(pk, s)| pk * von_neumann_entropy(s)).sum();
        Ok(von_neumann_entropy(&mix) - avg)
    })
}

/// Klein: -tr ρ ln σ ≥ S(ρ) for full-rank σ.
pub fn klein(trials: usize, seed: u64) -> Result<SuiteResult> {
    run_suite("klein", trials, seed, INEQUALITY_TOL, |rng| {
        let dim = rng.random_range(2..=6);
        let rho = any_state(rng, dim);
        let sigma = random_state(rng, dim);
        Ok(cross_entropy(&rho, &sigma)? - von_neumann_entropy(&rho))
    })
}

/// -|I - J - δ| on random two-qubit states.
pub fn decomposition(trials: usize, seed: u64) -> Result<SuiteResult> {
    let layout = SubsystemLayout::from_pairs(&[("A", 2), ("B", 2)])?;
    run_suite("discord_decomposition", trials, seed, DECOMPOSITION_TOL, |rng| {
        let rho = any_state(rng, 4);
        let c = analyze_correlations(&rho, &layout, DEFAULT_GRID_N)?;
        Ok(-(c.mutual_information - c.classical_correlation - c.discord).abs())
    })
}

/// The four entropy inequalities, each seeded from its own offset of `seed`.
pub fn inequality_suites(trials: usize, seed: u64) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        subadditivity(trials, seed)?,
        measurement_entropy(trials, seed.wrapping_add(1 << 20))?,
        concavity(trials, seed.wrapping_add(2 << 20))?,
        klein(trials, seed.wrapping_add(3 << 20))?,
    ])
}
