//! Deterministic singular-value theorems. These admit no violations beyond
//! floating-point slack.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use super::{LemmaReport, Result, VerifyError};
use crate::linalg::{inverse, singular_values, woodbury_inverse, DenseMatrix, LinalgError};
use crate::matpoly::{circulant_split, MatrixPolynomial};
use crate::rng::{gaussian_matrix, RngStream};
use crate::tolerances::TOLERANCES;

fn slack(sigma_max: f64) -> f64 {
    TOLERANCES.deterministic_slack * sigma_max.max(f64::MIN_POSITIVE)
}

fn numerical_rank(sigma: &[f64], rows: usize, cols: usize) -> usize {
    let cutoff = TOLERANCES.rank_cutoff(rows, cols, sigma.first().copied().unwrap_or(0.0));
    sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Low-rank interlacing: with `B = A + E`, `r = rank E`, `α = σ(A)`, `β = σ(B)`:
/// `αᵢ ≥ β_{i+r}` and `βᵢ ≥ α_{i+r}`.
pub fn check_lowrank_interlacing(a: &DenseMatrix, e: &DenseMatrix) -> Result<LemmaReport> {
    let m = a.require_square()?;
    if e.shape() != a.shape() {
        return Err(LinalgError::DimensionMismatch {
            context: format!("perturbation is {}x{}, matrix is {m}x{m}", e.rows(), e.cols()),
        }
        .into());
    }
    let b = a.try_add(e)?;
    let alpha = singular_values(a)?;
    let beta = singular_values(&b)?;
    let r = numerical_rank(&singular_values(e)?, m, m);
    let s = slack(alpha[0].max(beta[0]));
    let mut margins = Vec::new();
    let mut observed = Vec::new();
    for i in 0..m.saturating_sub(r) {
        margins.push(alpha[i] - beta[i + r] + s);
        observed.push(beta[i + r]);
        margins.push(beta[i] - alpha[i + r] + s);
        observed.push(alpha[i + r]);
    }
    Ok(LemmaReport::new(
        "lowrank-interlacing",
        format!("sigma_i(A) >= sigma_(i+r)(A+E) and vice versa, rank E = {r}"),
        true,
        margins,
        observed,
    ))
}

/// Mirsky: `|σᵢ(A) − σᵢ(B)| ≤ ‖A − B‖` for every `i`.
pub fn check_mirsky(a: &DenseMatrix, b: &DenseMatrix) -> Result<LemmaReport> {
    a.require_square()?;
    let diff = a.try_sub(b)?;
    let alpha = singular_values(a)?;
    let beta = singular_values(b)?;
    let norm = singular_values(&diff)?[0];
    let s = slack(alpha[0].max(beta[0]));
    let observed: Vec<f64> = alpha.iter().zip(&beta).map(|(x, y)| (x - y).abs()).collect();
    let margins = observed.iter().map(|d| norm - d + s).collect();
    Ok(LemmaReport::new(
        "mirsky",
        "|sigma_i(A) - sigma_i(B)| <= ||A - B||",
        true,
        margins,
        observed,
    ))
}

/// Submatrix interlacing for the `p × q` submatrix `S` on the given rows and columns of
/// the `m × n` matrix `A`: `σᵢ(A) ≥ σᵢ(S) ≥ σ_{i+(m−p)+(n−q)}(A)`. In particular
/// `‖A‖ ≥ ‖S‖` and `σ_{min(p,q)}(A) ≥ σ_min(S)`.
pub fn check_submatrix_interlacing(a: &DenseMatrix, rows: &[usize], cols: &[usize]) -> Result<LemmaReport> {
    if rows.is_empty() || cols.is_empty() {
        return Err(VerifyError::InvalidConfig(
            "row and column subsets must be nonempty".into(),
        ));
    }
    let sub = a.select(rows, cols)?;
    let (m, n) = a.shape();
    let (p, q) = sub.shape();
    let alpha = singular_values(a)?;
    let beta = singular_values(&sub)?;
    let s = slack(alpha[0]);
    let shift = (m - p) + (n - q);
    let mut margins = Vec::new();
    let mut observed = Vec::new();
    for (i, &b) in beta.iter().enumerate() {
        margins.push(alpha[i] - b + s);
        observed.push(b);
        if let Some(&lower) = alpha.get(i + shift) {
            margins.push(b - lower + s);
            observed.push(lower);
        }
    }
    Ok(LemmaReport::new(
        "submatrix-interlacing",
        format!("{p}x{q} submatrix of a {m}x{n} matrix"),
        true,
        margins,
        observed,
    ))
}

fn condition_number(x: &DenseMatrix) -> Result<f64> {
    let s = singular_values(x)?;
    Ok(s[0] / s[s.len() - 1])
}

/// Woodbury inverse of `A + UV` against the direct inverse. The forward error
/// is compared with `slack · κ(A) · κ(A + UV)`.
pub fn check_woodbury(a: &DenseMatrix, u: &DenseMatrix, v: &DenseMatrix) -> Result<LemmaReport> {
    let a_inv = inverse(a)?;
    let w = woodbury_inverse(&a_inv, u, v)?;
    let b = a.try_add(&u.matmul(v)?)?;
    let direct = inverse(&b)?;
    let err = crate::linalg::frobenius_norm(&w.try_sub(&direct)?) / crate::linalg::frobenius_norm(&direct);
    let bound = TOLERANCES.deterministic_slack * condition_number(a)? * condition_number(&b)?;
    Ok(LemmaReport::new(
        "woodbury-consistency",
        "relative distance between the Woodbury and direct inverses",
        true,
        vec![bound - err],
        vec![err],
    ))
}

/// Block circulant shift `B` (`k` blocks of size `n`): `σ(B − zI)` equals the
/// multiset `{|ω − z| : ωᵏ = 1}` (each `n` times), hence lies in
/// `[|1 − |z||, 1 + |z|]`.
pub fn check_circulant_shift(n: usize, k: usize, z: Complex64) -> Result<LemmaReport> {
    let zero = MatrixPolynomial::monic(vec![DenseMatrix::zeros(n, n); k])?;
    let b = circulant_split(&zero)?.b;
    let sigma = singular_values(&b.shifted(z)?)?;
    let mut closed: Vec<f64> = (0..k)
        .flat_map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
            std::iter::repeat_n((w - z).norm(), n)
        })
        .collect();
    closed.sort_by(|x, y| y.total_cmp(x));
    let s = slack(sigma[0]);
    let upper = 1.0 + z.norm();
    let lower = (1.0 - z.norm()).abs();
    let smallest = sigma[sigma.len() - 1];
    let worst_gap = sigma
        .iter()
        .zip(&closed)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(LemmaReport::new(
        "circulant-shift-bounds",
        format!("singular values of B - zI, n = {n}, k = {k}"),
        true,
        vec![upper - sigma[0] + s, smallest - lower + s, s - worst_gap],
        vec![sigma[0], smallest, worst_gap],
    ))
}

/// Random instances of every deterministic check. One margin per instance
/// (its worst margin). Instance `i` draws from `rng.substream(i)`.
pub fn theorem_sweeps(instances: usize, dim: usize, rng: &RngStream) -> Result<Vec<LemmaReport>> {
    if dim < 2 {
        return Err(VerifyError::InvalidConfig("sweep dimension must be at least 2".into()));
    }
    let run = |label: u64, f: &(dyn Fn(&mut rand_chacha::ChaCha8Rng) -> Result<LemmaReport> + Sync)| {
        let root = rng.substream(label);
        let per: Vec<LemmaReport> = (0..instances as u64)
            .into_par_iter()
            .map(|i| f(&mut root.substream(i).generator()))
            .collect::<Result<_>>()?;
        let template = per.first().cloned();
        let margins: Vec<f64> = per.iter().map(|r| r.min_margin()).collect();
        let observed = margins.clone();
        let (id, _) = template.map(|t| (t.lemma_id, t.description)).unwrap_or_default();
        Ok::<_, VerifyError>(LemmaReport::new(
            id,
            format!("{instances} random instances, worst margin per instance"),
            true,
            margins,
            observed,
        ))
    };

    let reports = vec![
        run(1, &|g| {
            let a = gaussian_matrix(g, dim, dim, 1.0);
            let norm = 10.0 * g.random::<f64>();
            let x = gaussian_matrix(g, dim, 1, 1.0);
            let y = gaussian_matrix(g, 1, dim, 1.0);
            let e = x.matmul(&y)?;
            let e = e.scale_real(norm / singular_values(&e)?[0]);
            check_lowrank_interlacing(&a, &e)
        })?,
        run(2, &|g| {
            let a = gaussian_matrix(g, dim, dim, 1.0);
            let variance = g.random::<f64>();
            let b = a.try_add(&gaussian_matrix(g, dim, dim, variance))?;
            check_mirsky(&a, &b)
        })?,
        run(3, &|g| {
            let a = gaussian_matrix(g, dim, dim + 2, 1.0);
            let rows = random_subset(g, dim);
            let cols = random_subset(g, dim + 2);
            check_submatrix_interlacing(&a, &rows, &cols)
        })?,
        run(4, &|g| {
            // shifted to keep A comfortably invertible
            let shift = 3.0 * (dim as f64).sqrt();
            let a = gaussian_matrix(g, dim, dim, 1.0).shifted(Complex64::new(-shift, 0.0))?;
            let r = 1 + g.random_range(0..dim / 2);
            let u = gaussian_matrix(g, dim, r, 1.0);
            let v = gaussian_matrix(g, r, dim, 1.0);
            check_woodbury(&a, &u, &v)
        })?,
        run(5, &|g| {
            let n = g.random_range(1..=3);
            let k = g.random_range(2..=12);
            let z = Complex64::from_polar(2.0 * g.random::<f64>(), 2.0 * std::f64::consts::PI * g.random::<f64>());
            check_circulant_shift(n, k, z)
        })?,
    ];
    Ok(reports)
}

fn random_subset<R: Rng>(g: &mut R, len: usize) -> Vec<usize> {
    loop {
        let subset: Vec<usize> = (0..len).filter(|_| g.random::<bool>()).collect();
        if !subset.is_empty() {
            return subset;
        }
    }
}
