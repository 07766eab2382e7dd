use super::{singular_values, DenseMatrix, Result};

/// `sqrt(Σ |x_ij|²)`.
pub fn frobenius_norm(x: &DenseMatrix) -> f64 {
    x.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn spectral_norm(x: &DenseMatrix) -> Result<f64> {
    Ok(singular_values(x)?[0])
}

/// Induced 1-norm: maximum column sum of entry moduli.
pub fn norm_one(x: &DenseMatrix) -> f64 {
    (0..x.cols())
        .map(|j| (0..x.rows()).map(|i| x[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Induced ∞-norm: maximum row sum of entry moduli.
pub fn norm_inf(x: &DenseMatrix) -> f64 {
    (0..x.rows())
        .map(|i| x.row(i).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}
