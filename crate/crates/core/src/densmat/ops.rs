use nalgebra::SymmetricEigen;

use super::matrix::{c, ComplexMatrix};
use super::state::{DensityMatrix, Hamiltonian};
use super::{SubsystemLayout, VALIDATION_TOL};
use crate::error::{Error, Result};

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_nalgebra(a.as_nalgebra().kronecker(b.as_nalgebra()))
}

/// Reduced state on the `keep` factors, returned in layout order.
pub fn partial_trace<S: AsRef<str>>(
    rho: &DensityMatrix,
    layout: &SubsystemLayout,
    keep: &[S],
) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidLayout("partial trace must keep at least one factor".into()));
    }
    layout.check_dim(rho.dim(), "state")?;
    let kept = layout.select(keep)?;
    let keep_pos: Vec<usize> = kept.labels().map(|l| layout.position(l).unwrap()).collect();
    let traced_pos: Vec<usize> = (0..layout.len()).filter(|p| !keep_pos.contains(p)).collect();
    Ok(DensityMatrix::from_matrix_unchecked(trace_out(
        rho.matrix(),
        layout,
        &keep_pos,
        &traced_pos,
        kept.total_dim(),
    )))
}

fn trace_out(
    m: &ComplexMatrix,
    layout: &SubsystemLayout,
    keep_pos: &[usize],
    traced_pos: &[usize],
    kept_dim: usize,
) -> ComplexMatrix {
    let n = layout.len();
    let total = layout.total_dim();
    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    let mut dr = vec![0; n];
    let mut dc = vec![0; n];
    for r in 0..total {
        layout.digits(r, &mut dr);
        let kr = layout.join(&dr, keep_pos);
        let tr = layout.join(&dr, traced_pos);
        for col in 0..total {
            layout.digits(col, &mut dc);
            if layout.join(&dc, traced_pos) != tr {
                continue;
            }
            let kc = layout.join(&dc, keep_pos);
            let v = out.get(kr, kc) + m.get(r, col);
            out.set(kr, kc, v);
        }
    }
    out
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    /// V diag(f(λ)) V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = c(0.0, 0.0);
            for k in 0..n {
                acc += v.get(i, k) * v.get(j, k).conj() * f(self.values[k]);
            }
            acc
        })
    }
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Eigen> {
    let defect = m.hermiticity_defect();
    if defect > VALIDATION_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.rows();
    let eig = SymmetricEigen::new(m.hermitian_part().into_nalgebra());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// Gibbs state exp(-βH)/Z. β = 0 gives the maximally mixed state.
pub fn thermal_state(h: &Hamiltonian, beta: f64) -> Result<DensityMatrix> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!("inverse temperature {beta} must be finite and >= 0")));
    }
    let eig = eig_hermitian(h.matrix())?;
    let e0 = eig.values[0];
    let weights: Vec<f64> = eig.values.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    let n = weights.len();
    let v = &eig.vectors;
    let m = ComplexMatrix::from_fn(n, n, |i, j| {
        let mut acc = c(0.0, 0.0);
        for k in 0..n {
            acc += v.get(i, k) * v.get(j, k).conj() * (weights[k] / z);
        }
        acc
    });
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

/// U ρ U†.
pub fn apply_unitary(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    if u.rows() != rho.dim() || u.cols() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, state has dimension {}",
            u.rows(),
            u.cols(),
            rho.dim()
        )));
    }
    let defect = u.unitarity_defect();
    if defect > VALIDATION_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(DensityMatrix::from_matrix_unchecked(u.matmul(rho.matrix()).matmul(&u.adjoint())))
}

/// Lifts `op` on factor `target` to the full space: I ⊗ … ⊗ op ⊗ … ⊗ I.
pub fn embed_local(op: &ComplexMatrix, layout: &SubsystemLayout, target: &str) -> Result<ComplexMatrix> {
    embed_operator(op, layout, &[target])
}

/// Lifts `op` acting on several factors (taken in layout order) to the full space.
pub fn embed_operator<S: AsRef<str>>(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    targets: &[S],
) -> Result<ComplexMatrix> {
    let sub = layout.select(targets)?;
    if sub.len() != targets.len() {
        return Err(Error::InvalidLayout("repeated target label".into()));
    }
    if op.rows() != sub.total_dim() || op.cols() != sub.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, targets span dimension {}",
            op.rows(),
            op.cols(),
            sub.total_dim()
        )));
    }
    let tpos: Vec<usize> = sub.labels().map(|l| layout.position(l).unwrap()).collect();
    let rpos: Vec<usize> = (0..layout.len()).filter(|p| !tpos.contains(p)).collect();
    let total = layout.total_dim();
    let n = layout.len();
    let mut out = ComplexMatrix::zeros(total, total);
    let mut dr = vec![0; n];
    let mut dc = vec![0; n];
    for r in 0..total {
        layout.digits(r, &mut dr);
        let rest = layout.join(&dr, &rpos);
        let tr = layout.join(&dr, &tpos);
        for col in 0..total {
            layout.digits(col, &mut dc);
            if layout.join(&dc, &rpos) == rest {
                out.set(r, col, op.get(tr, layout.join(&dc, &tpos)));
            }
        }
    }
    Ok(out)
}

/// Permutes the tensor factors of `m` from `layout` order into `order`.
///
/// `order` must name every factor of `layout` exactly once.
pub fn reorder<S: AsRef<str>>(m: &ComplexMatrix, layout: &SubsystemLayout, order: &[S]) -> Result<ComplexMatrix> {
    layout.check_dim(m.rows(), "matrix")?;
    if order.len() != layout.len() {
        return Err(Error::InvalidLayout("reordering must name every factor".into()));
    }
    let pos: Vec<usize> = order.iter().map(|l| layout.position(l.as_ref())).collect::<Result<_>>()?;
    for (i, p) in pos.iter().enumerate() {
        if pos[..i].contains(p) {
            return Err(Error::InvalidLayout("repeated label in reordering".into()));
        }
    }
    let total = layout.total_dim();
    let n = layout.len();
    // new index -> old index
    let mut map = vec![0; total];
    let mut d = vec![0; n];
    for old in 0..total {
        layout.digits(old, &mut d);
        map[layout.join(&d, &pos)] = old;
    }
    Ok(ComplexMatrix::from_fn(total, total, |i, j| m.get(map[i], map[j])))
}
