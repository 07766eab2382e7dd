//! Log-determinant gaps and partial log-singular-value sums.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Result, VerifyError};
use crate::linalg::{log_abs_det, singular_values, DenseMatrix, LinalgError};
use crate::tolerances::TOLERANCES;

/// How [`replacement_gap`] scales its inputs before shifting by `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapConvention {
    /// Matrices are raw `m × m` i.i.d.-type matrices; scale by `m^{-1/2}`.
    RootDimension,
    /// Matrices already carry the intended scaling (e.g. `n^{-1/2} M` in the
    /// growing-`n` regime, unscaled `M` in the growing-`k` regime).
    Prescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapValue {
    /// `±inf` when a shifted matrix is numerically singular.
    pub value: f64,
    pub singular: bool,
}

impl GapValue {
    fn from_logdets(a: crate::linalg::LogAbsDet, b: crate::linalg::LogAbsDet, m: usize) -> Self {
        let singular = a.deficient || b.deficient;
        let value = match (a.deficient, b.deficient) {
            (true, true) => f64::NAN,
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => (a.value - b.value) / m as f64,
        };
        Self { value, singular }
    }
}

fn same_square(a: &DenseMatrix, b: &DenseMatrix) -> Result<usize> {
    let m = a.require_square()?;
    if b.shape() != a.shape() {
        return Err(LinalgError::DimensionMismatch {
            context: format!("gap between {m}x{m} and {}x{} matrices", b.rows(), b.cols()),
        }
        .into());
    }
    Ok(m)
}

/// `(1/m)(log|det(m^{-1/2}a − zI)| − log|det(m^{-1/2}b − zI)|)`.
pub fn replacement_gap(a: &DenseMatrix, b: &DenseMatrix, z: Complex64) -> Result<GapValue> {
    gap_with(a, b, z, GapConvention::RootDimension)
}

/// `(1/m)(log|det(a − zI)| − log|det(b − zI)|)` for caller-scaled `a`, `b`.
pub fn replacement_gap_prescaled(a: &DenseMatrix, b: &DenseMatrix, z: Complex64) -> Result<GapValue> {
    gap_with(a, b, z, GapConvention::Prescaled)
}

pub(crate) fn gap_with(a: &DenseMatrix, b: &DenseMatrix, z: Complex64, convention: GapConvention) -> Result<GapValue> {
    let m = same_square(a, b)?;
    let factor = match convention {
        GapConvention::RootDimension => 1.0 / (m as f64).sqrt(),
        GapConvention::Prescaled => 1.0,
    };
    let la = log_abs_det(&a.scale_real(factor).shifted(z)?)?;
    let lb = log_abs_det(&b.scale_real(factor).shifted(z)?)?;
    Ok(GapValue::from_logdets(la, lb, m))
}

/// `f(n) = ⌊kn − n^{1−δ}⌋`; rejected unless `n ≤ f(n) ≤ kn`.
pub fn f_index(n: usize, k: usize, delta: f64) -> Result<usize> {
    let kn = (n * k) as f64;
    let f = (kn - (n as f64).powf(1.0 - delta)).floor();
    if !(f >= n as f64) {
        return Err(VerifyError::InvalidConfig(format!(
            "f(n) = floor(kn - n^(1-delta)) = {f} is below n = {n} (k = {k}, delta = {delta}); use a larger n"
        )));
    }
    Ok(f as usize)
}

/// `(1/n) Σ_{i ≥ from_index} log σᵢ(n^{-1/2}x − zI)`, singular values
/// descending and 1-based. `from_index = dim + 1` gives the empty sum.
pub fn tail_log_sum(x: &DenseMatrix, n: usize, z: Complex64, from_index: usize) -> Result<GapValue> {
    let dim = x.require_square()?;
    if n == 0 || from_index == 0 || from_index > dim + 1 {
        return Err(VerifyError::InvalidConfig(format!(
            "need n >= 1 and 1 <= from_index <= {}, got n = {n}, from_index = {from_index}",
            dim + 1
        )));
    }
    if from_index == dim + 1 {
        return Ok(GapValue {
            value: 0.0,
            singular: false,
        });
    }
    let sigma = singular_values(&x.scale_real(1.0 / (n as f64).sqrt()).shifted(z)?)?;
    let cutoff = TOLERANCES.rank_cutoff(dim, dim, sigma[0]);
    let tail = &sigma[from_index - 1..];
    if tail.iter().any(|&s| s <= cutoff) {
        return Ok(GapValue {
            value: f64::NEG_INFINITY,
            singular: true,
        });
    }
    Ok(GapValue {
        value: tail.iter().map(|s| s.ln()).sum::<f64>() / n as f64,
        singular: false,
    })
}
