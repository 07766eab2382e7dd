//! Dense complex linear algebra.
//!
//! [`DenseMatrix`] is a row-major complex matrix (`data[i * cols + j] = X[i, j]`)
//! and is the only matrix type used across the crate. The heavy kernels
//! (SVD and the Schur-based eigenvalue solver) run on `faer`; balancing,
//! LU, pseudoinverse, Woodbury inversion and log-determinants are local.

mod decomp;
mod inverse;
mod norms;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

pub use decomp::{balance, eigenvalues, singular_values, svd, Spectrum, SvdResult};
pub use inverse::{inverse, log_abs_det, lu_factor, pseudoinverse, woodbury_inverse, LogAbsDet, LuFactors};
pub use norms::{frobenius_norm, norm_inf, norm_one, spectral_norm};

/// Complex scalar used for every matrix entry.
pub type ComplexScalar = Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("entry buffer has length {actual}, expected {expected}")]
    BadLength { expected: usize, actual: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("{routine} failed to converge (residual {residual:e})")]
    NoConvergence { routine: &'static str, residual: f64 },
    #[error("matrix is numerically singular (sigma_min = {sigma_min:e})")]
    Singular { sigma_min: f64 },
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    /// Build from a row-major buffer, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(LinalgError::BadLength {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix {rows}x{cols}");
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Build from complex rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch {
                context: format!("ragged rows: expected {c} columns, found {}", bad.len()),
            });
        }
        Self::new(r, c, rows.concat())
    }

    /// Build from real rows.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::from_diag(&diag)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LinalgError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.map(|z| z * factor)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `self − z·I` for a square matrix.
    pub fn shifted(&self, z: Complex64) -> Result<Self> {
        let n = self.require_square()?;
        let mut m = self.clone();
        for i in 0..n {
            m[(i, i)] -= z;
        }
        Ok(m)
    }

    /// Submatrix made of the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        if rows.is_empty() || cols.is_empty() {
            return Err(LinalgError::Empty {
                rows: rows.len(),
                cols: cols.len(),
            });
        }
        if let Some(&r) = rows.iter().find(|&&r| r >= self.rows) {
            return Err(LinalgError::DimensionMismatch {
                context: format!("row index {r} out of range for {} rows", self.rows),
            });
        }
        if let Some(&c) = cols.iter().find(|&&c| c >= self.cols) {
            return Err(LinalgError::DimensionMismatch {
                context: format!("column index {c} out of range for {} columns", self.cols),
            });
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])]))
    }

    /// Overwrite the block starting at `(row0, col0)` with `block`.
    pub fn set_block(&mut self, row0: usize, col0: usize, block: &DenseMatrix) {
        assert!(
            row0 + block.rows <= self.rows && col0 + block.cols <= self.cols,
            "block {}x{} at ({row0}, {col0}) does not fit in {}x{}",
            block.rows,
            block.cols,
            self.rows,
            self.cols
        );
        for i in 0..block.rows {
            let dst = (row0 + i) * self.cols + col0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self[(row0 + i, col0 + j)])
    }

    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch {
                context: format!(
                    "cannot multiply {}x{} by {}x{}",
                    self.rows, self.cols, rhs.rows, rhs.cols
                ),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(l)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, rhs: &DenseMatrix, op: &str, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(LinalgError::DimensionMismatch {
                context: format!("cannot {op} {}x{} and {}x{}", self.rows, self.cols, rhs.rows, rhs.cols),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn try_add(&self, rhs: &DenseMatrix) -> Result<Self> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &DenseMatrix) -> Result<Self> {
        self.zip_with(rhs, "subtract", |a, b| a - b)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub(crate) fn to_faer(&self) -> faer::Mat<Complex64> {
        faer::Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_faer(m: faer::MatRef<'_, Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Operator forms panic on shape mismatch, like ndarray/nalgebra; use the
// `try_*`/`matmul` methods where shapes are not known statically.
impl Mul for &DenseMatrix {
    type Output = DenseMatrix;

    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &DenseMatrix {
    type Output = DenseMatrix;

    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &DenseMatrix {
    type Output = DenseMatrix;

    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, "  ")?;
            for z in self.row(i).iter().take(8) {
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            if self.cols > 8 {
                write!(f, "...")?;
            }
            writeln!(f)?;
        }
        if self.rows > 8 {
            writeln!(f, "  ...")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_buffers() {
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![ZERO; 3]),
            Err(LinalgError::BadLength { expected: 4, actual: 3 })
        ));
        assert!(matches!(DenseMatrix::new(0, 2, vec![]), Err(LinalgError::Empty { .. })));
        let err = DenseMatrix::new(1, 2, vec![ONE, c(f64::NAN, 0.0)]).unwrap_err();
        assert_eq!(err, LinalgError::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = DenseMatrix::from_rows(&[vec![c(1.0, 1.0), c(2.0, 0.0)], vec![c(0.0, -1.0), c(3.0, 0.0)]]).unwrap();
        let id = DenseMatrix::identity(2);
        assert_eq!(&a * &id, a);
        let aa = a.adjoint();
        assert_eq!(aa[(0, 1)], c(0.0, 1.0));
        assert_eq!(aa[(1, 0)], c(2.0, 0.0));
        assert!(a.matmul(&DenseMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn shifted_and_select() {
        let a = DenseMatrix::from_real_rows(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]]).unwrap();
        assert!(a.shifted(ONE).is_err());
        let b = a.select(&[1], &[0, 2]).unwrap();
        assert_eq!(b.shape(), (1, 2));
        assert_eq!(b[(0, 1)], c(6.0, 0.0));
        let sq = DenseMatrix::identity(2).shifted(c(1.0, 0.0)).unwrap();
        assert_eq!(sq.max_abs(), 0.0);
    }

    #[test]
    fn set_block_round_trip() {
        let mut m = DenseMatrix::zeros(4, 4);
        let blk = DenseMatrix::identity(2).scale_real(3.0);
        m.set_block(2, 1, &blk);
        assert_eq!(m.block(2, 1, 2, 2), blk);
        assert_eq!(m[(0, 0)], ZERO);
    }
}
