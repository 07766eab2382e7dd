//! Monic matrix polynomials `P(x) = I xᵏ + C_{k−1} xᵏ⁻¹ + … + C₀`, their
//! Gaussian sampler and their two block splittings.
//!
//! Gaussian convention: "mean 0, variance 1" complex entries means
//! `E|X|² = 1`, i.e. real and imaginary parts are independent `N(0, 1/2)`.
//! All scaling constants in the crate (the `n^{-1/2}` rescaling of the
//! growing-`n` regime, the lemma bounds) assume this normalization.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{eigenvalues, DenseMatrix, LinalgError, Spectrum, ONE};
use crate::rng::{gaussian_matrix, RngStream};

#[derive(Debug, thiserror::Error)]
pub enum PolyError {
    #[error("invalid polynomial: {0}")]
    Invalid(String),
    #[error("operation requires a monic polynomial")]
    NotMonic,
    #[error("the circulant splitting needs degree k >= 2, got k = {0}")]
    DegreeTooLow(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Square matrix polynomial of size `n` and degree `k`.
///
/// When `monic` is set, `coeffs` holds `C₀, …, C_{k−1}` and the leading
/// coefficient is the identity. Otherwise `coeffs` holds `C₀, …, C_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixPolynomial {
    n: usize,
    k: usize,
    coeffs: Vec<DenseMatrix>,
    monic: bool,
    provenance: Option<RngStream>,
}

impl MatrixPolynomial {
    /// Monic polynomial with lower-order coefficients `C₀, …, C_{k−1}`.
    pub fn monic(coeffs: Vec<DenseMatrix>) -> Result<Self, PolyError> {
        Self::build(coeffs, true)
    }

    /// General polynomial with coefficients `C₀, …, C_k` (leading last).
    pub fn general(coeffs: Vec<DenseMatrix>) -> Result<Self, PolyError> {
        if coeffs.len() < 2 {
            return Err(PolyError::Invalid(
                "a general polynomial needs at least C0 and C1".into(),
            ));
        }
        Self::build(coeffs, false)
    }

    fn build(coeffs: Vec<DenseMatrix>, monic: bool) -> Result<Self, PolyError> {
        let first = coeffs
            .first()
            .ok_or_else(|| PolyError::Invalid("degree must be at least 1".into()))?;
        let n = first.rows();
        for (j, c) in coeffs.iter().enumerate() {
            if c.shape() != (n, n) {
                return Err(PolyError::Invalid(format!(
                    "coefficient {j} is {}x{}, expected {n}x{n}",
                    c.rows(),
                    c.cols()
                )));
            }
        }
        let k = if monic { coeffs.len() } else { coeffs.len() - 1 };
        Ok(Self {
            n,
            k,
            coeffs,
            monic,
            provenance: None,
        })
    }

    /// Scalar monic polynomial `xᵏ + c_{k−1} xᵏ⁻¹ + … + c₀` from `[c₀, …, c_{k−1}]`.
    pub fn scalar_monic(lower: &[Complex64]) -> Result<Self, PolyError> {
        Self::monic(lower.iter().map(|&c| DenseMatrix::from_diag(&[c])).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_monic(&self) -> bool {
        self.monic
    }

    pub fn coeffs(&self) -> &[DenseMatrix] {
        &self.coeffs
    }

    /// The stream this polynomial was sampled from, if any.
    pub fn provenance(&self) -> Option<RngStream> {
        self.provenance
    }

    /// `sqrt(Σ_j ‖C_j‖_F²)` over the stored coefficients.
    pub fn coefficient_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.data().iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    fn require_monic(&self) -> Result<(), PolyError> {
        if self.monic {
            Ok(())
        } else {
            Err(PolyError::NotMonic)
        }
    }
}

/// Monic polynomial whose `k` lower coefficients are `n × n` matrices of
/// i.i.d. standard complex Gaussians, drawn in order `C₀, …, C_{k−1}` from
/// the start of `rng`.
pub fn sample_monic_gaussian(n: usize, k: usize, rng: &RngStream) -> Result<MatrixPolynomial, PolyError> {
    if n == 0 || k == 0 {
        return Err(PolyError::Invalid(format!(
            "need n >= 1 and k >= 1, got n = {n}, k = {k}"
        )));
    }
    let mut gen = rng.generator();
    let coeffs = (0..k).map(|_| gaussian_matrix(&mut gen, n, n, 1.0)).collect();
    let mut p = MatrixPolynomial::monic(coeffs)?;
    p.provenance = Some(*rng);
    Ok(p)
}

/// Horner evaluation of `P(x)`.
pub fn evaluate(p: &MatrixPolynomial, x: Complex64) -> DenseMatrix {
    let mut acc = if p.monic {
        DenseMatrix::identity(p.n)
    } else {
        p.coeffs[p.k].clone()
    };
    for c in p.coeffs[..p.k].iter().rev() {
        acc = &acc.scale(x) + c;
    }
    acc
}

/// Companion matrix `M = Z + E₁ Cᵀ` and its parts.
#[derive(Debug, Clone)]
pub struct CompanionSplitN {
    /// `kn × kn` companion: top block row `−C_{k−1}, …, −C₀`, identities on the block subdiagonal.
    pub m: DenseMatrix,
    /// Block subdiagonal identities.
    pub z_shift: DenseMatrix,
    /// `kn × n` selector of the first block row.
    pub e1: DenseMatrix,
    /// `n × kn`, `−[C_{k−1} … C₀]`.
    pub c_t: DenseMatrix,
}

pub fn companion(p: &MatrixPolynomial) -> Result<CompanionSplitN, PolyError> {
    p.require_monic()?;
    let (n, k) = (p.n, p.k);
    let dim = n * k;

    let mut c_t = DenseMatrix::zeros(n, dim);
    for (block, coeff) in p.coeffs.iter().rev().enumerate() {
        c_t.set_block(0, block * n, &coeff.scale_real(-1.0));
    }
    let mut z_shift = DenseMatrix::zeros(dim, dim);
    for i in n..dim {
        z_shift[(i, i - n)] = ONE;
    }
    let mut e1 = DenseMatrix::zeros(dim, n);
    for i in 0..n {
        e1[(i, i)] = ONE;
    }
    let mut m = z_shift.clone();
    m.set_block(0, 0, &c_t);
    Ok(CompanionSplitN { m, z_shift, e1, c_t })
}

/// `M = B + A` with `B` the block circulant shift and `A = E₁ Ĉᵀ` of rank at most `n`.
#[derive(Debug, Clone)]
pub struct CompanionSplitK {
    pub m: DenseMatrix,
    /// Identity blocks on the block subdiagonal and in the top-right corner.
    pub b: DenseMatrix,
    /// Top block row `−C_{k−1}, …, −C₁, −(C₀ + I)`, zeros elsewhere.
    pub a: DenseMatrix,
    /// `n × kn`, `Ĉᵀ = Cᵀ − e_kᵀ ⊗ I`.
    pub c_hat_t: DenseMatrix,
}

pub fn circulant_split(p: &MatrixPolynomial) -> Result<CompanionSplitK, PolyError> {
    p.require_monic()?;
    if p.k < 2 {
        return Err(PolyError::DegreeTooLow(p.k));
    }
    let (n, k) = (p.n, p.k);
    let dim = n * k;
    let CompanionSplitN { m, z_shift, c_t, .. } = companion(p)?;

    let mut b = z_shift;
    for i in 0..n {
        b[(i, dim - n + i)] = ONE;
    }
    let mut c_hat_t = c_t;
    for i in 0..n {
        c_hat_t[(i, dim - n + i)] -= ONE;
    }
    let mut a = DenseMatrix::zeros(dim, dim);
    a.set_block(0, 0, &c_hat_t);
    Ok(CompanionSplitK { m, b, a, c_hat_t })
}

/// Spectrum of the block circulant `B`: the `k`-th roots of unity, each with
/// multiplicity `n`, in closed form.
pub fn circulant_b_eigenvalues(n: usize, k: usize) -> Spectrum {
    let eigenvalues = (0..k)
        .flat_map(|j| {
            let root = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / k as f64);
            std::iter::repeat_n(root, n)
        })
        .collect();
    Spectrum { eigenvalues }
}

/// The `kn` finite eigenvalues, as eigenvalues of the companion matrix.
pub fn finite_eigenvalues(p: &MatrixPolynomial) -> Result<Spectrum, PolyError> {
    let split = companion(p)?;
    Ok(eigenvalues(&split.m)?)
}

/// On-disk form: `{schema_version, n, k, seed, stream, monic, coeffs}` where
/// `coeffs[j]` lists the `[re, im]` pairs of `C_j` row-major.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialRecord {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub seed: Option<u64>,
    pub stream: Option<u64>,
    pub monic: bool,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

pub const POLYNOMIAL_SCHEMA_VERSION: u32 = 1;

impl From<&MatrixPolynomial> for PolynomialRecord {
    fn from(p: &MatrixPolynomial) -> Self {
        Self {
            schema_version: POLYNOMIAL_SCHEMA_VERSION,
            n: p.n,
            k: p.k,
            seed: p.provenance.map(|s| s.seed),
            stream: p.provenance.map(|s| s.stream_id),
            monic: p.monic,
            coeffs: p
                .coeffs
                .iter()
                .map(|c| c.data().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

impl TryFrom<PolynomialRecord> for MatrixPolynomial {
    type Error = PolyError;

    fn try_from(rec: PolynomialRecord) -> Result<Self, PolyError> {
        let expected = if rec.monic { rec.k } else { rec.k + 1 };
        if rec.coeffs.len() != expected {
            return Err(PolyError::Invalid(format!(
                "record lists {} coefficients, expected {expected}",
                rec.coeffs.len()
            )));
        }
        let coeffs = rec
            .coeffs
            .iter()
            .map(|c| {
                let data = c.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                DenseMatrix::new(rec.n, rec.n, data)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut p = MatrixPolynomial::build(coeffs, rec.monic)?;
        if let (Some(seed), Some(stream)) = (rec.seed, rec.stream) {
            p.provenance = Some(RngStream::new(seed, stream));
        }
        Ok(p)
    }
}

impl MatrixPolynomial {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PolynomialRecord::from(self)).expect("record serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, PolyError> {
        let rec: PolynomialRecord = serde_json::from_str(s).map_err(|e| PolyError::Invalid(e.to_string()))?;
        rec.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frobenius_norm;
    use crate::linalg::{singular_values, ZERO};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn sampling_is_deterministic_and_shaped() {
        let s = RngStream::new(42, 7);
        let p = sample_monic_gaussian(3, 4, &s).unwrap();
        let q = sample_monic_gaussian(3, 4, &s).unwrap();
        assert_eq!(p, q);
        assert_eq!((p.n(), p.k(), p.coeffs().len()), (3, 4, 4));
        assert!(p.is_monic());
        assert!(sample_monic_gaussian(0, 2, &s).is_err());
        assert!(sample_monic_gaussian(2, 0, &s).is_err());
    }

    #[test]
    fn sampled_entries_have_unit_second_moment() {
        let p = sample_monic_gaussian(100, 10, &RngStream::new(1, 1)).unwrap();
        let entries: Vec<Complex64> = p.coeffs().iter().flat_map(|m| m.data().to_vec()).collect();
        let count = entries.len() as f64;
        let mean: Complex64 = entries.iter().sum::<Complex64>() / count;
        let second = entries.iter().map(|z| z.norm_sqr()).sum::<f64>() / count;
        assert!(mean.re.abs() <= 0.02 && mean.im.abs() <= 0.02);
        assert!((second - 1.0).abs() <= 0.02);
    }

    #[test]
    fn evaluate_examples() {
        let p = sample_monic_gaussian(2, 3, &RngStream::new(3, 0)).unwrap();
        assert_eq!(evaluate(&p, ZERO), p.coeffs()[0]);
        let q = MatrixPolynomial::scalar_monic(&[c(-1.0, 0.0), ZERO]).unwrap();
        assert_eq!(evaluate(&q, ONE)[(0, 0)], ZERO);
    }

    #[test]
    fn scalar_companion_layout() {
        let (c0, c1) = (c(2.0, 1.0), c(-3.0, 0.5));
        let p = MatrixPolynomial::scalar_monic(&[c0, c1]).unwrap();
        let split = companion(&p).unwrap();
        let expect = DenseMatrix::from_rows(&[vec![-c1, -c0], vec![ONE, ZERO]]).unwrap();
        assert_eq!(split.m, expect);

        let lin = MatrixPolynomial::scalar_monic(&[c0]).unwrap();
        assert_eq!(companion(&lin).unwrap().m, DenseMatrix::from_diag(&[-c0]));
    }

    #[test]
    fn companion_split_is_exact() {
        let p = sample_monic_gaussian(3, 4, &RngStream::new(9, 9)).unwrap();
        let s = companion(&p).unwrap();
        assert_eq!(s.m, &s.z_shift + &(&s.e1 * &s.c_t));
        assert_eq!(s.m.shape(), (12, 12));
    }

    #[test]
    fn companion_of_squared_difference() {
        // P(x) = I x² − I has det (x² − 1)²
        let p = MatrixPolynomial::monic(vec![
            DenseMatrix::identity(2).scale_real(-1.0),
            DenseMatrix::zeros(2, 2),
        ])
        .unwrap();
        let ev = sorted(finite_eigenvalues(&p).unwrap().eigenvalues);
        let expect = [-1.0, -1.0, 1.0, 1.0];
        for (z, e) in ev.iter().zip(expect) {
            assert!((z - c(e, 0.0)).norm() < 1e-12, "{z} vs {e}");
        }
    }

    #[test]
    fn rejects_non_monic() {
        let p = MatrixPolynomial::general(vec![DenseMatrix::identity(2), DenseMatrix::identity(2)]).unwrap();
        assert!(matches!(companion(&p), Err(PolyError::NotMonic)));
        assert!(matches!(circulant_split(&p), Err(PolyError::NotMonic)));
        // non-monic evaluation still works: P(x) = I + I x
        assert_eq!(evaluate(&p, ONE), DenseMatrix::identity(2).scale_real(2.0));
    }

    #[test]
    fn circulant_split_examples() {
        let zero = MatrixPolynomial::scalar_monic(&[ZERO, ZERO]).unwrap();
        let s = circulant_split(&zero).unwrap();
        assert_eq!(s.b, DenseMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap());
        assert_eq!(s.a, DenseMatrix::from_real_rows(&[&[0.0, -1.0], &[0.0, 0.0]]).unwrap());

        let p = sample_monic_gaussian(2, 5, &RngStream::new(5, 1)).unwrap();
        let k_split = circulant_split(&p).unwrap();
        let n_split = companion(&p).unwrap();
        assert_eq!(k_split.m, n_split.m);
        assert!(frobenius_norm(&(&k_split.m - &(&k_split.b + &k_split.a))) <= 1e-14 * frobenius_norm(&k_split.m));
        let sigma = singular_values(&k_split.a).unwrap();
        assert!(sigma[2] <= 1e-12 * sigma[0]);

        let lin = MatrixPolynomial::scalar_monic(&[ONE]).unwrap();
        assert!(matches!(circulant_split(&lin), Err(PolyError::DegreeTooLow(1))));
    }

    #[test]
    fn circulant_eigenvalues_closed_form() {
        let s = circulant_b_eigenvalues(1, 4);
        let expect = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (z, e) in s.eigenvalues.iter().zip(expect) {
            assert!((z - e).norm() < 1e-15);
        }
        let one = circulant_b_eigenvalues(3, 1);
        assert_eq!(one.eigenvalues, vec![ONE; 3]);
    }

    #[test]
    fn finite_eigenvalue_examples() {
        let p = MatrixPolynomial::scalar_monic(&[c(-1.0, 0.0), ZERO]).unwrap();
        let ev = sorted(finite_eigenvalues(&p).unwrap().eigenvalues);
        assert!((ev[0] + ONE).norm() < 1e-14 && (ev[1] - ONE).norm() < 1e-14);

        let (a, b) = (c(0.5, -2.0), c(3.0, 1.0));
        let lin = MatrixPolynomial::monic(vec![DenseMatrix::from_diag(&[-a, -b])]).unwrap();
        let ev = sorted(finite_eigenvalues(&lin).unwrap().eigenvalues);
        assert!((ev[0] - a).norm() < 1e-14 && (ev[1] - b).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip_keeps_provenance() {
        let p = sample_monic_gaussian(2, 3, &RngStream::new(77, 5)).unwrap();
        let json = p.to_json();
        assert!(json.contains("\"seed\":77"));
        let back = MatrixPolynomial::from_json(&json).unwrap();
        assert_eq!(back, p);
        assert!(MatrixPolynomial::from_json("{\"n\":1}").is_err());
    }
}
