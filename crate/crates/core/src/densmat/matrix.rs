use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};

/// Shorthand for building a complex scalar.
#[inline]
pub fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

/// A dense complex matrix, stored by nalgebra in column-major order.
///
/// Constructors and accessors use (row, col) indexing and row-major input so
/// that literals in code read the way they are written on paper.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex<f64>>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimensions must be positive");
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex<f64>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex<f64>]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from nested rows. All rows must have the same length.
    pub fn from_rows(rows: &[Vec<Complex<f64>>]) -> Result<Self> {
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<_> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), ncols, &flat)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { c(diag[i], 0.0) } else { c(0.0, 0.0) })
    }

    /// Outer product |v⟩⟨v|.
    pub fn projector(ket: &[Complex<f64>]) -> Self {
        let n = ket.len();
        Self::from_fn(n, n, |i, j| ket[i] * ket[j].conj())
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[Complex<f64>], b: &[Complex<f64>]) -> Self {
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_y() -> Self {
        Self(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]))
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let m = rows[0].len();
        Self::from_fn(n, m, |i, j| c(rows[i][j], 0.0))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<f64> {
        self.0[(row, col)]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<f64>) {
        self.0[(row, col)] = value;
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex<f64>> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex<f64>>> {
        (0..self.rows()).map(|i| (0..self.cols()).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> Complex<f64> {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * c(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex<f64>) -> Self {
        Self(&self.0 * s)
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.0.shape(), other.0.shape(), "shape mismatch");
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// max |m - m†|, or infinity for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// max |U†U - I|, or infinity for non-square input.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let prod = self.adjoint().matmul(self);
        prod.max_abs_diff(&Self::identity(self.rows()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// (m + m†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c(0.5, 0.0))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols(), rhs.rows(), "inner dimensions differ");
        Self(&self.0 * &rhs.0)
    }

    /// Real part of tr(self · rhs).
    pub fn trace_product_re(&self, rhs: &Self) -> f64 {
        assert_eq!(self.cols(), rhs.rows());
        assert_eq!(self.rows(), rhs.cols());
        let mut acc = 0.0;
        for i in 0..self.rows() {
            for k in 0..self.cols() {
                acc += (self.get(i, k) * rhs.get(k, i)).re;
            }
        }
        acc
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex<f64>> {
        &self.0
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex<f64>> {
        self.0
    }

    pub fn from_nalgebra(m: DMatrix<Complex<f64>>) -> Self {
        assert!(m.nrows() >= 1 && m.ncols() >= 1, "matrix dimensions must be positive");
        Self(m)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for i in 0..self.rows() {
            write!(f, "  ")?;
            for j in 0..self.cols() {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}
