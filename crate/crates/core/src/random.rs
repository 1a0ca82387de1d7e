//! Seeded generators for random states, unitaries and Hamiltonians.
//!
//! Used by the property suites, the verification sweep and the benches. All
//! generators take the RNG explicitly so that a fixed seed reproduces a run.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densmat::{c, ComplexMatrix, DensityMatrix};
use crate::infomeasures::BlochAngles;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// Full-rank mixed state from the Hilbert–Schmidt ensemble.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    random_state_with_rank(rng, dim, dim)
}

/// Mixed state G G† / tr with G of shape dim × rank.
pub fn random_state_with_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank.max(1));
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr)).expect("G G† is a state")
}

pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    random_state_with_rank(rng, dim, 1)
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase correction).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim).into_nalgebra();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let q = ComplexMatrix::from_nalgebra(q);
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        q.get(i, j) * phase
    })
}

/// Random Hermitian matrix with operator norm at most `max_norm`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_norm: f64) -> ComplexMatrix {
    let g = ginibre(rng, dim, dim);
    let h = g.hermitian_part();
    let eig = crate::densmat::eig_hermitian(&h).expect("hermitian");
    let spread = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let target: f64 = rng.random_range(0.0..=max_norm);
    h.scale(if spread > 0.0 { target / spread } else { 0.0 })
}

/// Uniformly distributed direction on the Bloch sphere.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochAngles {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    BlochAngles::new(z.acos(), phi)
}

/// Random probability vector of length `n` (flat Dirichlet).
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = seeded(1);
        for d in 1..6 {
            assert!(random_unitary(&mut rng, d).is_unitary(1e-12));
        }
    }

    #[test]
    fn same_seed_same_state() {
        let a = random_state(&mut seeded(9), 4);
        let b = random_state(&mut seeded(9), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn hermitian_norm_is_bounded() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 4, 10.0);
            let e = crate::densmat::eig_hermitian(&h).unwrap().values;
            assert!(e.iter().all(|v| v.abs() <= 10.0 + 1e-9));
        }
    }
}
