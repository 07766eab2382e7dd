use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{singular_values, svd, DenseMatrix, LinalgError, Result, ONE, ZERO};
use crate::tolerances::TOLERANCES;

/// `P·X = L·U` with unit-lower `L` and upper `U` packed into one matrix.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    /// `pivots[i]` is the original row now stored at row `i`.
    pivots: Vec<usize>,
    swaps: usize,
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn determinant(&self) -> Complex64 {
        let sign = if self.swaps % 2 == 0 { 1.0 } else { -1.0 };
        (0..self.dim()).fold(Complex64::new(sign, 0.0), |acc, i| acc * self.lu[(i, i)])
    }

    #[allow(clippy::needless_range_loop)]
    pub fn solve_vec(&self, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(LinalgError::DimensionMismatch {
                context: format!("right-hand side of length {} for dimension {n}", rhs.len()),
            });
        }
        let mut y: Vec<Complex64> = self.pivots.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * y[j];
            }
            let d = self.lu[(i, i)];
            if d == ZERO {
                return Err(LinalgError::Singular { sigma_min: 0.0 });
            }
            y[i] = acc / d;
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<DenseMatrix> {
        let n = self.dim();
        let mut inv = DenseMatrix::zeros(n, n);
        let mut e = vec![ZERO; n];
        for j in 0..n {
            e.fill(ZERO);
            e[j] = ONE;
            let col = self.solve_vec(&e)?;
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Ok(inv)
    }
}

/// LU factorization with partial pivoting. Fails only on an exactly zero pivot column.
pub fn lu_factor(x: &DenseMatrix) -> Result<LuFactors> {
    let n = x.require_square()?;
    let mut lu = x.clone();
    let mut pivots: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, lu[(i, k)].norm()))
            .fold((k, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best == 0.0 {
            return Err(LinalgError::Singular { sigma_min: 0.0 });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            pivots.swap(k, p);
            swaps += 1;
        }
        let pivot = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor != ZERO {
                for j in k + 1..n {
                    let ukj = lu[(k, j)];
                    lu[(i, j)] -= factor * ukj;
                }
            }
        }
    }
    Ok(LuFactors { lu, pivots, swaps })
}

/// Dense inverse through LU.
pub fn inverse(x: &DenseMatrix) -> Result<DenseMatrix> {
    lu_factor(x)?.inverse()
}

/// Moore–Penrose pseudoinverse `V* Σ† U*`. Singular values at or below
/// `max(m, n) · eps · σ₁` are treated as zero.
pub fn pseudoinverse(x: &DenseMatrix) -> Result<DenseMatrix> {
    let (m, n) = x.shape();
    let s = svd(x)?;
    let cutoff = TOLERANCES.rank_cutoff(m, n, s.sigma[0]);
    // X = U Σ V  =>  X† = V* Σ† U*
    let v_star = s.v.adjoint();
    let mut scaled = DenseMatrix::zeros(n, m);
    for (idx, &sigma) in s.sigma.iter().enumerate() {
        if sigma <= cutoff || sigma == 0.0 {
            continue;
        }
        let inv = 1.0 / sigma;
        for i in 0..n {
            let vi = v_star[(i, idx)] * inv;
            for j in 0..m {
                scaled[(i, j)] += vi * s.u[(j, idx)].conj();
            }
        }
    }
    Ok(scaled)
}

/// Inverse of `B = A + U V` given `A⁻¹`:
/// `B⁻¹ = A⁻¹ − A⁻¹ U (I + V A⁻¹ U)⁻¹ V A⁻¹`.
pub fn woodbury_inverse(a_inverse: &DenseMatrix, u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a_inverse.require_square()?;
    let r = u.cols();
    if u.rows() != n || v.rows() != r || v.cols() != n {
        return Err(LinalgError::DimensionMismatch {
            context: format!(
                "woodbury needs A⁻¹ {n}x{n}, U {n}xr, V rx{n}; got U {}x{}, V {}x{}",
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            ),
        });
    }
    let a_inv_u = a_inverse * u;
    let v_a_inv = v * a_inverse;
    let mut capacitance = v * &a_inv_u;
    for i in 0..r {
        capacitance[(i, i)] += ONE;
    }
    let sigma = singular_values(&capacitance)?;
    let sigma_min = *sigma.last().expect("nonempty");
    if sigma_min <= TOLERANCES.woodbury_capacitance_rtol * sigma[0] {
        return Err(LinalgError::Singular { sigma_min });
    }
    let correction = &(&a_inv_u * &inverse(&capacitance)?) * &v_a_inv;
    Ok(a_inverse - &correction)
}

/// `log |det X|` computed as `Σ log σᵢ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogAbsDet {
    /// `-inf` when `deficient` is set.
    pub value: f64,
    /// Some singular value fell below the numerical-rank cutoff.
    pub deficient: bool,
}

impl LogAbsDet {
    pub fn finite(&self) -> Option<f64> {
        (!self.deficient).then_some(self.value)
    }
}

pub fn log_abs_det(x: &DenseMatrix) -> Result<LogAbsDet> {
    let n = x.require_square()?;
    let sigma = singular_values(x)?;
    let cutoff = TOLERANCES.rank_cutoff(n, n, sigma[0]);
    if sigma[0] == 0.0 || sigma.iter().any(|&s| s <= cutoff) {
        return Ok(LogAbsDet {
            value: f64::NEG_INFINITY,
            deficient: true,
        });
    }
    Ok(LogAbsDet {
        value: sigma.iter().map(|s| s.ln()).sum(),
        deficient: false,
    })
}
