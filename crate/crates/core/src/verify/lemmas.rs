//! Probabilistic singular-value bounds for shifted companion matrices, swept
//! over trials and sizes.

use rayon::prelude::*;

use super::{f_index, fit_log_exponent, median, CellSummary, LemmaCheckConfig, LemmaReport, Result, VerifyError};
use crate::linalg::{singular_values, DenseMatrix};
use crate::matpoly::{circulant_split, companion, sample_monic_gaussian};
use crate::rng::RngStream;
use crate::tolerances::TOLERANCES;

struct Quantity {
    id: &'static str,
    description: String,
    deterministic: bool,
    fit: bool,
}

/// One trial's `(observed, margin)` per quantity, in quantity order.
type TrialRecord = Vec<(f64, f64)>;

fn cell_stream(rng: &RngStream, tag: u64, n: usize, k: usize) -> RngStream {
    rng.substream(tag).substream(((n as u64) << 32) | k as u64)
}

/// Runs `trial` for every `(cell, trial)` pair and folds the records into
/// one report per quantity. `fit_size` picks the regressor of the fitted exponent.
fn run_suite(
    cfg: &LemmaCheckConfig,
    rng: &RngStream,
    tag: u64,
    quantities: &[Quantity],
    fit_size: impl Fn(usize, usize) -> usize,
    trial: impl Fn(usize, usize, &RngStream) -> Result<TrialRecord> + Sync,
) -> Result<Vec<LemmaReport>> {
    let mut reports: Vec<LemmaReport> = quantities
        .iter()
        .map(|q| LemmaReport::new(q.id, q.description.clone(), q.deterministic, Vec::new(), Vec::new()))
        .collect();
    let mut fit_sizes = Vec::new();
    for &(n, k) in &cfg.sizes {
        let root = cell_stream(rng, tag, n, k);
        let records: Vec<TrialRecord> = (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| trial(n, k, &root.substream(t)))
            .collect::<Result<_>>()?;
        fit_sizes.extend(std::iter::repeat_n(fit_size(n, k), records.len()));
        for (qi, report) in reports.iter_mut().enumerate() {
            let observed: Vec<f64> = records.iter().map(|r| r[qi].0).collect();
            let margins: Vec<f64> = records.iter().map(|r| r[qi].1).collect();
            let mut cell = LemmaReport::new("", "", false, margins, observed);
            cell.cells.push(CellSummary {
                n,
                k,
                trials: cfg.trials,
                violations: cell.violations,
                median_observed: median(&cell.per_trial_observed),
                min_margin: cell.min_margin(),
            });
            report.absorb(cell);
        }
    }
    for (q, report) in quantities.iter().zip(reports.iter_mut()) {
        if q.fit {
            report.fitted_exponent = fit_log_exponent(&fit_sizes, &report.per_trial_observed);
        }
    }
    Ok(reports)
}

/// Growing-`n` regime. Per trial, with `X = n^{-1/2}M − zI` and
/// `Y = n^{-1/2}E₁Cᵀ − zI`:
///
/// * `σ_kn(X) ≥ n^{−a−2}` and `σ_kn(Y) ≥ n^{−ã−2}`;
/// * `σ₁(X) ≤ d` and `σ₁(Y) ≤ d`;
/// * `σ_{f(n)}(Y) ≥ t n^{ε−1/2}` with `f(n) = ⌊kn − n^{1−δ}⌋`.
///
/// The two smallest singular values get a fitted exponent in `n`.
pub fn lemma_suite_regime_n(cfg: &LemmaCheckConfig, rng: &RngStream) -> Result<Vec<LemmaReport>> {
    cfg.validate()?;
    if cfg.z.norm() == 0.0 {
        return Err(VerifyError::InvalidConfig(
            "growing-n checks require a nonzero shift z".into(),
        ));
    }
    for &(n, k) in &cfg.sizes {
        if k < 2 {
            return Err(VerifyError::InvalidConfig(format!(
                "the sigma_f(n) check needs k >= 2, got k = {k}"
            )));
        }
        f_index(n, k, cfg.delta)?;
    }
    let q = |id, description: String, fit| Quantity {
        id,
        description,
        deterministic: false,
        fit,
    };
    let quantities = [
        q(
            "regime-n/sigma-min-companion",
            format!("sigma_kn(n^-1/2 M - zI) >= n^-(a+2), a = {}", cfg.exponent_a),
            true,
        ),
        q(
            "regime-n/sigma-min-rank-n-part",
            format!(
                "sigma_kn(n^-1/2 E1 C^T - zI) >= n^-(a~+2), a~ = {}",
                cfg.exponent_a_tilde
            ),
            true,
        ),
        q(
            "regime-n/norm-companion",
            format!("sigma_1(n^-1/2 M - zI) <= d = {}", cfg.norm_bound_d),
            false,
        ),
        q(
            "regime-n/norm-rank-n-part",
            format!("sigma_1(n^-1/2 E1 C^T - zI) <= d = {}", cfg.norm_bound_d),
            false,
        ),
        q(
            "regime-n/sigma-f-rank-n-part",
            format!(
                "sigma_f(n)(n^-1/2 E1 C^T - zI) >= t n^(eps-1/2), t = {}, eps = {}, delta = {}",
                cfg.constant_t, cfg.epsilon, cfg.delta
            ),
            false,
        ),
    ];
    run_suite(
        cfg,
        rng,
        0x6e,
        &quantities,
        |n, _| n,
        |n, k, stream| {
            let p = sample_monic_gaussian(n, k, stream)?;
            let split = companion(&p)?;
            let scale = 1.0 / (n as f64).sqrt();
            let x = split.m.scale_real(scale).shifted(cfg.z)?;
            let mut e1ct = DenseMatrix::zeros(n * k, n * k);
            e1ct.set_block(0, 0, &split.c_t.scale_real(scale));
            let y = e1ct.shifted(cfg.z)?;
            let sx = singular_values(&x)?;
            let sy = singular_values(&y)?;
            let nf = n as f64;
            let f = f_index(n, k, cfg.delta)?;
            let last = n * k - 1;
            let lower_a = nf.powf(-cfg.exponent_a - 2.0);
            let lower_at = nf.powf(-cfg.exponent_a_tilde - 2.0);
            let lower_f = cfg.constant_t * nf.powf(cfg.epsilon - 0.5);
            Ok(vec![
                (sx[last], sx[last] - lower_a),
                (sy[last], sy[last] - lower_at),
                (sx[0], cfg.norm_bound_d - sx[0]),
                (sy[0], cfg.norm_bound_d - sy[0]),
                (sy[f - 1], sy[f - 1] - lower_f),
            ])
        },
    )
}

/// Growing-`k` regime. Per trial, with `M = B + A` the circulant split:
///
/// * `σ₁(M − zI) ≤ r√k + 1 + |z|`;
/// * `σ_n(M − zI) ≥ |1 − |z||` (deterministic);
/// * `σ_kn(M − zI) ≥ t k^{−2}`, with a fitted exponent in `k`;
/// * `σ_{i+n}(B − zI) ≤ σᵢ(M − zI) ≤ σ_{i−n}(B − zI)` for `n < i ≤ kn − n`
///   (deterministic, worst margin per trial). `σ(B − zI)` is the closed form
///   `{|ω − z| : ωᵏ = 1}`, each value `n` times.
pub fn lemma_suite_regime_k(cfg: &LemmaCheckConfig, rng: &RngStream) -> Result<Vec<LemmaReport>> {
    cfg.validate()?;
    let r = cfg.z.norm();
    if r == 0.0 || (r - 1.0).abs() <= 1e-12 {
        return Err(VerifyError::InvalidConfig(format!(
            "growing-k checks require |z| different from 0 and 1, got |z| = {r}"
        )));
    }
    if let Some(&(_, k)) = cfg.sizes.iter().find(|&&(_, k)| k <= 2) {
        return Err(VerifyError::InvalidConfig(format!(
            "growing-k checks need k > 2, got k = {k}"
        )));
    }
    let quantities = [
        Quantity {
            id: "regime-k/norm",
            description: format!("sigma_1(M - zI) <= r sqrt(k) + 1 + |z|, r = {}", cfg.constant_r),
            deterministic: false,
            fit: false,
        },
        Quantity {
            id: "regime-k/sigma-n",
            description: "sigma_n(M - zI) >= |1 - |z||".into(),
            deterministic: true,
            fit: false,
        },
        Quantity {
            id: "regime-k/sigma-min",
            description: format!("sigma_kn(M - zI) >= t k^-2, t = {}", cfg.constant_t),
            deterministic: false,
            fit: true,
        },
        Quantity {
            id: "regime-k/interlacing",
            description: "sigma_(i+n)(B - zI) <= sigma_i(M - zI) <= sigma_(i-n)(B - zI), n < i <= kn - n".into(),
            deterministic: true,
            fit: false,
        },
    ];
    run_suite(
        cfg,
        rng,
        0x6b,
        &quantities,
        |_, k| k,
        |n, k, stream| {
            let p = sample_monic_gaussian(n, k, stream)?;
            let split = circulant_split(&p)?;
            let sm = singular_values(&split.m.shifted(cfg.z)?)?;
            let mut sb: Vec<f64> = (0..k)
                .flat_map(|j| {
                    let w = num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64);
                    std::iter::repeat_n((w - cfg.z).norm(), n)
                })
                .collect();
            sb.sort_by(|a, b| b.total_cmp(a));
            let slack = TOLERANCES.deterministic_slack * sm[0].max(sb[0]);
            let kn = n * k;
            let upper = cfg.constant_r * (k as f64).sqrt() + 1.0 + r;
            let lower_n = (1.0 - r).abs();
            let lower_min = cfg.constant_t * (k as f64).powi(-2);
            // 1-based i in (n, kn − n]  ->  0-based idx = i − 1
            let mut worst = f64::INFINITY;
            let mut worst_obs = f64::NAN;
            for idx in n..kn.saturating_sub(n) {
                let lo = sm[idx] - sb[idx + n] + slack;
                let hi = sb[idx - n] - sm[idx] + slack;
                let m = lo.min(hi);
                if m < worst {
                    worst = m;
                    worst_obs = sm[idx];
                }
            }
            if worst == f64::INFINITY {
                worst = slack;
            }
            Ok(vec![
                (sm[0], upper - sm[0]),
                (sm[n - 1], sm[n - 1] - lower_n + slack),
                (sm[kn - 1], sm[kn - 1] - lower_min),
                (worst_obs, worst),
            ])
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn regime_n_small_run() {
        let cfg = LemmaCheckConfig {
            trials: 20,
            sizes: vec![(16, 3), (24, 3), (32, 3)],
            ..Default::default()
        };
        let reports = lemma_suite_regime_n(&cfg, &RngStream::new(1, 0)).unwrap();
        assert_eq!(reports.len(), 5);
        for r in &reports {
            assert_eq!(r.per_trial_margins.len(), 60);
            assert_eq!(r.cells.len(), 3);
            assert!(r.passed(), "{}: {}", r.lemma_id, r.min_margin());
        }
        assert!(reports[0].fitted_exponent.is_some());
    }

    #[test]
    fn regime_k_small_run() {
        let cfg = LemmaCheckConfig {
            z: Complex64::new(0.5, 0.0),
            trials: 20,
            sizes: vec![(2, 8), (2, 16), (2, 32)],
            ..Default::default()
        };
        let reports = lemma_suite_regime_k(&cfg, &RngStream::new(2, 0)).unwrap();
        assert_eq!(reports.len(), 4);
        for r in &reports {
            assert!(r.passed(), "{}: {}", r.lemma_id, r.min_margin());
        }
        assert!(reports[2].fitted_exponent.is_some());
    }

    #[test]
    fn preconditions_on_z() {
        let zero = LemmaCheckConfig {
            z: Complex64::new(0.0, 0.0),
            ..Default::default()
        };
        assert!(lemma_suite_regime_n(&zero, &RngStream::new(0, 0)).is_err());
        let unit = LemmaCheckConfig {
            z: Complex64::new(0.6, 0.8),
            sizes: vec![(2, 8)],
            ..Default::default()
        };
        let err = lemma_suite_regime_k(&unit, &RngStream::new(0, 0)).unwrap_err();
        assert!(err.to_string().contains("different from 0 and 1"));
    }

    #[test]
    fn same_seed_same_reports() {
        let cfg = LemmaCheckConfig {
            z: Complex64::new(0.5, 0.0),
            trials: 5,
            sizes: vec![(2, 4)],
            ..Default::default()
        };
        let a = lemma_suite_regime_k(&cfg, &RngStream::new(3, 0)).unwrap();
        let b = lemma_suite_regime_k(&cfg, &RngStream::new(3, 0)).unwrap();
        assert_eq!(a, b);
    }
}
