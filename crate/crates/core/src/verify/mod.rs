//! Numerical checks of the singular-value inequalities, tail bounds and
//! log-determinant gaps behind the two limit theorems.
//!
//! Every check produces a [`LemmaReport`]: one margin per trial, `bound −
//! observed` signed so that `≥ 0` passes. Deterministic inequalities
//! (theorems) fold their floating-point slack into the margin, so a negative
//! margin is always a genuine violation.

mod gap;
mod lemmas;
mod tails;
mod theorems;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::LinalgError;
use crate::matpoly::PolyError;

pub use gap::{f_index, replacement_gap, replacement_gap_prescaled, tail_log_sum, GapConvention, GapValue};
pub use lemmas::{lemma_suite_regime_k, lemma_suite_regime_n};
pub use tails::{
    beta_projection_cdf, beta_projection_check, binomial_allowance, gaussian_norm_tail, mc_pseudoinverse_tail,
    pseudoinverse_tail_bound, TailBound, TailEstimate,
};
pub use theorems::{
    check_circulant_shift, check_lowrank_interlacing, check_mirsky, check_submatrix_interlacing, check_woodbury,
    theorem_sweeps,
};

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("invalid check configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T, E = VerifyError> = std::result::Result<T, E>;

/// Per-`(n, k)` aggregate inside a [`LemmaReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub violations: usize,
    pub median_observed: f64,
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma_id: String,
    pub description: String,
    /// Theorem (zero violations required) rather than a probabilistic bound.
    pub deterministic: bool,
    pub per_trial_margins: Vec<f64>,
    /// The quantity the bound is applied to, aligned with `per_trial_margins`.
    pub per_trial_observed: Vec<f64>,
    pub violations: usize,
    /// Least-squares slope of `log observed` against `log size`.
    pub fitted_exponent: Option<f64>,
    pub cells: Vec<CellSummary>,
}

impl LemmaReport {
    pub fn new(
        lemma_id: impl Into<String>,
        description: impl Into<String>,
        deterministic: bool,
        per_trial_margins: Vec<f64>,
        per_trial_observed: Vec<f64>,
    ) -> Self {
        let violations = count_violations(&per_trial_margins);
        Self {
            lemma_id: lemma_id.into(),
            description: description.into(),
            deterministic,
            per_trial_margins,
            per_trial_observed,
            violations,
            fitted_exponent: None,
            cells: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn min_margin(&self) -> f64 {
        self.per_trial_margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Append another report's trials (same check, another cell).
    pub(crate) fn absorb(&mut self, other: LemmaReport) {
        self.per_trial_margins.extend(other.per_trial_margins);
        self.per_trial_observed.extend(other.per_trial_observed);
        self.cells.extend(other.cells);
        self.violations = count_violations(&self.per_trial_margins);
    }
}

/// NaN margins count as violations.
fn count_violations(margins: &[f64]) -> usize {
    margins.iter().filter(|m| !(**m >= 0.0)).count()
}

/// One JSON object per line.
pub fn reports_to_json_lines(reports: &[LemmaReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}

pub fn reports_from_json_lines(text: &str) -> serde_json::Result<Vec<LemmaReport>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Constants for the probabilistic singular-value lemmas. The underlying
/// results only assert that such constants exist; defaults come from pilot
/// runs (see [`LemmaCheckConfig::default`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LemmaCheckConfig {
    pub z: Complex64,
    /// Exponent in `f(n) = ⌊kn − n^{1−δ}⌋`, in `(0, 1/2)`.
    pub delta: f64,
    /// Gap exponent in `σ_{f(n)} ≥ t n^{ε−1/2}`, in `(0, 1/2 − δ)`.
    pub epsilon: f64,
    /// `σ_kn(n^{-1/2}M − zI) ≥ n^{−a−2}`.
    pub exponent_a: f64,
    /// `σ_kn(n^{-1/2}E₁Cᵀ − zI) ≥ n^{−ã−2}`.
    pub exponent_a_tilde: f64,
    /// Lower-bound constant `t` in `(0, 1]`.
    pub constant_t: f64,
    /// Spectral-norm bound `d` for the scaled shifted matrices.
    pub norm_bound_d: f64,
    /// `σ₁(M − zI) ≤ r√k + 1 + |z|`.
    pub constant_r: f64,
    pub trials: usize,
    /// `(n, k)` cells.
    pub sizes: Vec<(usize, usize)>,
}

impl Default for LemmaCheckConfig {
    /// Pilot calibration: 200 trials at `n ∈ {16, 32, 64}, k = 3,
    /// z = 0.7+0.3i` and at `n = 2, k ∈ {8, …, 256}, z = 0.5` showed no
    /// violation at these values.
    fn default() -> Self {
        Self {
            z: Complex64::new(0.7, 0.3),
            delta: 0.3,
            epsilon: 0.1,
            exponent_a: 1.0,
            exponent_a_tilde: 1.0,
            constant_t: 1e-3,
            norm_bound_d: 6.0,
            constant_r: 3.0,
            trials: 200,
            sizes: vec![(16, 3), (32, 3), (64, 3)],
        }
    }
}

impl LemmaCheckConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(VerifyError::InvalidConfig(m));
        if !(self.delta > 0.0 && self.delta < 0.5) {
            return bad(format!("delta must lie in (0, 1/2), got {}", self.delta));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5 - self.delta) {
            return bad(format!(
                "epsilon must lie in (0, 1/2 - delta) = (0, {}), got {}",
                0.5 - self.delta,
                self.epsilon
            ));
        }
        if !(self.constant_t > 0.0 && self.constant_t <= 1.0) {
            return bad(format!("constant t must lie in (0, 1], got {}", self.constant_t));
        }
        if !(self.norm_bound_d > 0.0 && self.constant_r > 0.0) {
            return bad("constants d and r must be positive".into());
        }
        if !self.z.is_finite() {
            return bad("z must be finite".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.sizes.is_empty() || self.sizes.iter().any(|&(n, k)| n == 0 || k == 0) {
            return bad("sizes must be a nonempty list of positive (n, k)".into());
        }
        Ok(())
    }
}

/// Least-squares slope of `y` on `x`; `None` with fewer than three distinct `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .map(|(&a, &b)| (a, b))
        .collect();
    let mut distinct: Vec<f64> = pts.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 3 {
        return None;
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Slope of `log observed` against `log size`, `sizes` aligned with `observed`.
pub fn fit_log_exponent(sizes: &[usize], observed: &[f64]) -> Option<f64> {
    let x: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let y: Vec<f64> = observed
        .iter()
        .map(|&v| if v > 0.0 { v.ln() } else { f64::NAN })
        .collect();
    fit_slope(&x, &y)
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn violations_count_negative_and_nan_margins() {
        let r = LemmaReport::new("x", "", true, vec![0.0, 1.0, -1e-20, f64::NAN], vec![0.0; 4]);
        assert_eq!(r.violations, 2);
        assert!(!r.passed());
    }

    #[test]
    fn json_lines_round_trip() {
        let mut r = LemmaReport::new("a", "desc", false, vec![0.5, 0.25], vec![1.0, 2.0]);
        r.fitted_exponent = Some(-1.5);
        let text = reports_to_json_lines(&[r.clone(), r.clone()]);
        assert_eq!(text.lines().count(), 2);
        assert_eq!(reports_from_json_lines(&text).unwrap(), vec![r.clone(), r]);
    }

    #[test]
    fn config_validation() {
        assert!(LemmaCheckConfig::default().validate().is_ok());
        let bad_delta = LemmaCheckConfig {
            delta: 0.5,
            ..Default::default()
        };
        assert!(bad_delta.validate().is_err());
        let bad_eps = LemmaCheckConfig {
            epsilon: 0.25,
            ..Default::default()
        };
        assert!(bad_eps.validate().is_err());
        let bad_t = LemmaCheckConfig {
            constant_t: 1.5,
            ..Default::default()
        };
        assert!(bad_t.validate().is_err());
    }

    #[test]
    fn slope_of_exact_power_law() {
        let sizes = [16, 32, 64, 16];
        let obs: Vec<f64> = sizes.iter().map(|&n| 3.0 * (n as f64).powf(-2.5)).collect();
        let s = fit_log_exponent(&sizes, &obs).unwrap();
        assert!((s + 2.5).abs() < 1e-12);
        assert!(fit_log_exponent(&[16, 32], &[1.0, 2.0]).is_none());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
        assert!(median(&[]).is_nan());
    }
}
