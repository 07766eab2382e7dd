use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{DenseMatrix, LinalgError, Result, ZERO};
use crate::tolerances::TOLERANCES;

/// Singular value decomposition `X = U · Σ · V` with `U` (m×m) and `V` (n×n) unitary.
///
/// Note that `v` is stored so that the product reconstructs `X` directly,
/// i.e. it is the conjugate transpose of the usual right singular vector
/// matrix.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub u: DenseMatrix,
    /// Descending, nonnegative, length `min(m, n)`.
    pub sigma: Vec<f64>,
    pub v: DenseMatrix,
}

impl SvdResult {
    /// Rebuild `U Σ V`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        // (U Σ) has the first min(m, n) columns of U scaled.
        let us = DenseMatrix::from_fn(m, n, |i, j| {
            if j < self.sigma.len() {
                self.u[(i, j)] * self.sigma[j]
            } else {
                ZERO
            }
        });
        &us * &self.v
    }

    pub fn sigma_min(&self) -> f64 {
        *self.sigma.last().expect("nonempty")
    }
}

/// Multiset of eigenvalues, with algebraic multiplicity. No ordering is implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Π |λᵢ|`.
    pub fn abs_product(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).product()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn svd(x: &DenseMatrix) -> Result<SvdResult> {
    let (m, n) = x.shape();
    let decomposition = x.to_faer().svd().map_err(|_| LinalgError::NoConvergence {
        routine: "svd",
        residual: f64::INFINITY,
    })?;
    let sigma: Vec<f64> = decomposition.S().column_vector().iter().map(|s| s.re).collect();
    let result = SvdResult {
        u: DenseMatrix::from_faer(decomposition.U()),
        sigma,
        v: DenseMatrix::from_faer(decomposition.V()).adjoint(),
    };
    let residual = super::frobenius_norm(&(&result.reconstruct() - x));
    let bound = TOLERANCES.svd_reconstruction * (m + n) as f64 * result.sigma[0];
    if residual > bound {
        return Err(LinalgError::NoConvergence {
            routine: "svd",
            residual,
        });
    }
    Ok(result)
}

/// Singular values only, descending.
pub fn singular_values(x: &DenseMatrix) -> Result<Vec<f64>> {
    x.to_faer().singular_values().map_err(|_| LinalgError::NoConvergence {
        routine: "singular values",
        residual: f64::INFINITY,
    })
}

/// Diagonal similarity scaling `D⁻¹ X D` (powers of two, so exact) that
/// equalizes off-diagonal row and column norms. Returns the balanced matrix
/// and the scaling factors.
pub fn balance(x: &DenseMatrix) -> Result<(DenseMatrix, Vec<f64>)> {
    const RADIX: f64 = 2.0;
    let n = x.require_square()?;
    let mut a = x.clone();
    let mut scale = vec![1.0; n];
    for _ in 0..TOLERANCES.balance_max_sweeps {
        let mut converged = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].l1_norm();
                    row += a[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let mut g = row / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = row * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + row) / f < 0.95 * total {
                converged = false;
                scale[i] *= f;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
    Ok((a, scale))
}

/// All eigenvalues of a square matrix (balancing, then Hessenberg reduction
/// and shifted QR to Schur form).
pub fn eigenvalues(x: &DenseMatrix) -> Result<Spectrum> {
    let n = x.require_square()?;
    if n == 1 {
        return Ok(Spectrum {
            eigenvalues: vec![x[(0, 0)]],
        });
    }
    let (balanced, _) = balance(x)?;
    let eigenvalues = balanced
        .to_faer()
        .eigenvalues()
        .map_err(|_| LinalgError::NoConvergence {
            routine: "Schur QR iteration",
            residual: f64::INFINITY,
        })?;
    debug_assert_eq!(eigenvalues.len(), n);
    Ok(Spectrum { eigenvalues })
}
