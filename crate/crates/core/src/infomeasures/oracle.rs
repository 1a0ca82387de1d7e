//! Brute-force discord: exhaustive θ–φ grid, no refinement.
//!
//! Deliberately shares no evaluation code with the refined minimizer: the
//! projector, the sandwich Π ρ Π, the partial trace and the qubit spectra are
//! all written out here on plain row-major buffers.

use std::f64::consts::PI;

use nalgebra::Complex;

use super::{bipartite_labels, MIN_GRID_N};
use crate::densmat::{eig_hermitian, ComplexMatrix, DensityMatrix, SubsystemLayout};
use crate::error::{Error, Result};

type C = Complex<f64>;

fn xlogx_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().filter(|&v| v > 1e-12).map(|v| -v * v.ln()).sum()
}

/// Eigenvalues of a 2×2 Hermitian matrix [[a, b], [b*, d]].
fn qubit_spectrum(a: f64, b: C, d: f64) -> [f64; 2] {
    let mean = 0.5 * (a + d);
    let gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - gap, mean + gap]
}

fn entropy_of(buf: &[C], n: usize) -> f64 {
    if n == 2 {
        return xlogx_sum(qubit_spectrum(buf[0].re, buf[1], buf[3].re));
    }
    let m = ComplexMatrix::from_row_major(n, n, buf).expect("square buffer");
    xlogx_sum(eig_hermitian(&m.hermitian_part()).expect("hermitian").values)
}

/// Minimum over the grid of δ(B|A); A is the first factor and must be a qubit.
///
/// The axes n and -n give the same basis, so φ only runs over [0, π): the
/// point (π - θ, φ + π) is the same measurement as (θ, φ).
pub fn discord_oracle(rho_ab: &DensityMatrix, layout: &SubsystemLayout, grid_n: usize) -> Result<f64> {
    bipartite_labels(layout)?;
    if grid_n < MIN_GRID_N {
        return Err(Error::InvalidParameter(format!("grid_n = {grid_n}, need at least {MIN_GRID_N}")));
    }
    let dims = layout.dims();
    if dims[0] != 2 {
        return Err(Error::NotQubit(dims[0]));
    }
    let db = dims[1];
    let n = 2 * db;
    if rho_ab.dim() != n {
        return Err(Error::DimensionMismatch(format!("state has dimension {}, layout {n}", rho_ab.dim())));
    }
    let rho: Vec<C> = rho_ab.matrix().to_row_major();

    // S(ρ_A) from the explicit reduction.
    let mut rho_a = [C::new(0.0, 0.0); 4];
    for a in 0..2 {
        for ap in 0..2 {
            for b in 0..db {
                rho_a[a * 2 + ap] += rho[(a * db + b) * n + ap * db + b];
            }
        }
    }
    let s_a = entropy_of(&rho_a, 2);
    let s_ab = entropy_of(&rho, n);

    let mut best = f64::INFINITY;
    let mut proj = vec![C::new(0.0, 0.0); n * n];
    let mut tmp = vec![C::new(0.0, 0.0); n * n];
    let mut branch = vec![C::new(0.0, 0.0); n * n];
    let mut cond = vec![C::new(0.0, 0.0); db * db];
    for i in 0..grid_n {
        let theta = PI * i as f64 / (grid_n - 1) as f64;
        for j in 0..grid_n {
            let phi = PI * j as f64 / grid_n as f64;
            let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let (cp, sp) = (phi.cos(), phi.sin());
            let kets = [
                [C::new(ct, 0.0), C::new(st * cp, st * sp)],
                [C::new(st, 0.0), C::new(-ct * cp, -ct * sp)],
            ];
            let mut value = 0.0;
            for ket in &kets {
                // P = |ψ⟩⟨ψ| ⊗ I_B
                for r in 0..n {
                    for col in 0..n {
                        let (a, b) = (r / db, r % db);
                        let (ap, bp) = (col / db, col % db);
                        proj[r * n + col] = if b == bp { ket[a] * ket[ap].conj() } else { C::new(0.0, 0.0) };
                    }
                }
                // branch = P ρ P
                for r in 0..n {
                    for col in 0..n {
                        let mut acc = C::new(0.0, 0.0);
                        for k in 0..n {
                            acc += proj[r * n + k] * rho[k * n + col];
                        }
                        tmp[r * n + col] = acc;
                    }
                }
                for r in 0..n {
                    for col in 0..n {
                        let mut acc = C::new(0.0, 0.0);
                        for k in 0..n {
                            acc += tmp[r * n + k] * proj[k * n + col];
                        }
                        branch[r * n + col] = acc;
                    }
                }
                let p: f64 = (0..n).map(|r| branch[r * n + r].re).sum();
                if p <= 1e-12 {
                    continue;
                }
                // tr_A, normalized
                for b in 0..db {
                    for bp in 0..db {
                        let mut acc = C::new(0.0, 0.0);
                        for a in 0..2 {
                            acc += branch[(a * db + b) * n + a * db + bp];
                        }
                        cond[b * db + bp] = acc / p;
                    }
                }
                value += p * entropy_of(&cond, db);
            }
            best = best.min(value);
        }
    }
    Ok(s_a - s_ab + best)
}
