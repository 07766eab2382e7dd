use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, HarnessError, Regime, Result};
use crate::esd::{
    annulus_fraction, distance_report, esd_of_polynomial, merge, DistanceReport, EmpiricalSpectralDistribution,
    LimitLaw,
};
use crate::linalg::DenseMatrix;
use crate::matpoly::sample_monic_gaussian;
use crate::rng::RngStream;
use crate::verify::{
    beta_projection_check, binomial_allowance, gaussian_norm_tail, lemma_suite_regime_k, lemma_suite_regime_n,
    mc_pseudoinverse_tail, pseudoinverse_tail_bound, theorem_sweeps, LemmaCheckConfig, LemmaReport,
};

pub const RESULT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    /// Stream id of the cell; trial `t` uses `substream(t)` of it.
    pub stream: u64,
    pub scale: f64,
    pub law: LimitLaw,
    pub report: DistanceReport,
    /// Fraction of points with `||λ| − 1| ≤ annulus_halfwidth` (growing-`k` regime).
    pub annulus_fraction: Option<f64>,
    pub point_count: usize,
    /// Points CSV, relative to the output directory, once exported.
    pub points_file: Option<String>,
    /// Seconds spent on the cell. Logged but not serialized, so outputs stay reproducible.
    #[serde(skip)]
    pub wallclock: f64,
    #[serde(skip)]
    pub esd: Option<EmpiricalSpectralDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub regime: Regime,
    pub seed: u64,
    pub cells: Vec<CellResult>,
}

/// `⌈target_points / (kn)⌉` unless the config fixes the count.
pub fn trials_for_cell(cfg: &ExperimentConfig, n: usize, k: usize) -> usize {
    cfg.trials.unwrap_or_else(|| cfg.target_points.div_ceil(n * k).max(1))
}

fn cell_label(n: usize, k: usize) -> u64 {
    ((n as u64) << 32) | k as u64
}

fn run_cell(cfg: &ExperimentConfig, rng: &RngStream, n: usize, k: usize) -> Result<CellResult> {
    let start = Instant::now();
    let trials = trials_for_cell(cfg, n, k);
    let stream = rng.substream(cell_label(n, k));
    let (scale, law) = match cfg.regime {
        Regime::GrowN => (1.0 / (n as f64).sqrt(), LimitLaw::DiscMixture { k }),
        Regime::GrowK => (1.0, LimitLaw::UnitCircle),
    };
    let per_trial: Vec<EmpiricalSpectralDistribution> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let p = sample_monic_gaussian(n, k, &stream.substream(t))?;
            Ok(esd_of_polynomial(&p, scale)?)
        })
        .collect::<Result<_>>()?;
    let esd = merge(&per_trial)?;
    let report = distance_report(&esd, &law, &cfg.distance_settings())?;
    let annulus = match cfg.regime {
        Regime::GrowK => Some(annulus_fraction(
            &esd,
            1.0 - cfg.annulus_halfwidth,
            1.0 + cfg.annulus_halfwidth,
        )),
        Regime::GrowN => None,
    };
    let wallclock = start.elapsed().as_secs_f64();
    log::info!(
        "{} n={n} k={k} trials={trials}: radial_ks={:.4} angular_ks={:.4} atom={:.4} ({wallclock:.2}s)",
        cfg.regime.as_str(),
        report.radial_ks,
        report.angular_ks,
        report.atom_mass_observed
    );
    Ok(CellResult {
        n,
        k,
        trials,
        seed: cfg.seed,
        stream: stream.stream_id,
        scale,
        law,
        report,
        annulus_fraction: annulus,
        point_count: esd.len(),
        points_file: None,
        wallclock,
        esd: Some(esd),
    })
}

fn run_regime(cfg: &ExperimentConfig, rng: &RngStream, expected: Regime) -> Result<ExperimentResult> {
    if cfg.regime != expected {
        return Err(HarnessError::Config(format!(
            "config regime is {}, expected {}",
            cfg.regime.as_str(),
            expected.as_str()
        )));
    }
    cfg.validate()?;
    let cells = cfg
        .cells()
        .into_iter()
        .map(|(n, k)| run_cell(cfg, rng, n, k))
        .collect::<Result<_>>()?;
    Ok(ExperimentResult {
        schema_version: RESULT_SCHEMA_VERSION,
        regime: cfg.regime,
        seed: cfg.seed,
        cells,
    })
}

/// Growing `n`: ESDs scaled by `n^{-1/2}`, compared with the disc mixture.
pub fn run_grow_n(cfg: &ExperimentConfig, rng: &RngStream) -> Result<ExperimentResult> {
    run_regime(cfg, rng, Regime::GrowN)
}

/// Growing `k`: unscaled ESDs, compared with the unit circle.
pub fn run_grow_k(cfg: &ExperimentConfig, rng: &RngStream) -> Result<ExperimentResult> {
    run_regime(cfg, rng, Regime::GrowK)
}

/// Runs the configured regime from the root stream `(seed, 0)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    let rng = RngStream::new(cfg.seed, 0);
    match cfg.regime {
        Regime::GrowN => run_grow_n(cfg, &rng),
        Regime::GrowK => run_grow_k(cfg, &rng),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationResult {
    pub schema_version: u32,
    pub seed: u64,
    pub reports: Vec<LemmaReport>,
    pub deterministic_violations: usize,
    pub probabilistic_violations: usize,
}

impl VerificationResult {
    /// Deterministic checks decide the outcome; probabilistic violations are reported.
    pub fn passed(&self) -> bool {
        self.deterministic_violations == 0
    }
}

fn validate_shifts(z_values: &[Complex64]) -> Result<()> {
    if z_values.is_empty() {
        return Err(HarnessError::Config("z_values must not be empty".into()));
    }
    for z in z_values {
        if z.norm() == 0.0 {
            return Err(HarnessError::Config(format!(
                "z = {z} violates the growing-n precondition 0 != z"
            )));
        }
        if (z.norm() - 1.0).abs() <= 1e-12 {
            return Err(HarnessError::Config(format!(
                "z = {z} violates the growing-k precondition: |z| must have norm different from 1"
            )));
        }
    }
    Ok(())
}

fn tail_report(id: &str, description: String, frequency: f64, bound: f64, trials: usize) -> LemmaReport {
    LemmaReport::new(
        id,
        description,
        false,
        vec![bound + binomial_allowance(bound, trials) - frequency],
        vec![frequency],
    )
}

/// Both lemma suites for every `z`, the deterministic theorem sweeps and the
/// tail checks. Report order is fixed: sweeps, tails, then per-`z` suites.
pub fn run_verification(cfg: &ExperimentConfig, rng: &RngStream) -> Result<VerificationResult> {
    validate_shifts(&cfg.z_values)?;
    let v = &cfg.verify;
    let mut reports = theorem_sweeps(v.theorem_instances, v.theorem_dim, &rng.substream(1))?;

    let (tn, big_n) = v.tail_shape;
    let bound = pseudoinverse_tail_bound(tn, big_n, v.tail_tau)?;
    let zero = DenseMatrix::zeros(tn, big_n);
    let mut fixed = DenseMatrix::zeros(tn, big_n);
    fixed[(0, 0)] = Complex64::new(v.tail_deterministic_norm, 0.0);
    for (label, r_det, name) in [(2, &zero, "zero"), (3, &fixed, "fixed")] {
        let est = mc_pseudoinverse_tail(tn, big_n, v.tail_tau, r_det, v.tail_trials, &rng.substream(label))?;
        reports.push(tail_report(
            &format!("pseudoinverse-tail/{name}"),
            format!(
                "P(sigma_n(R) <= {}) for {tn}x{big_n} R, deterministic part {name}; bound {:.4e}, {} events in {} trials",
                v.tail_tau, bound.value, est.events, est.trials
            ),
            est.frequency,
            bound.value,
            est.trials,
        ));
    }
    let norm = gaussian_norm_tail(
        v.norm_tail_n,
        v.norm_tail_threshold,
        v.norm_tail_trials,
        &rng.substream(4),
    )?;
    reports.push(tail_report(
        "gaussian-norm-tail",
        format!(
            "P(||G|| > {} sqrt(n)), n = {}; expected to vanish at this threshold",
            v.norm_tail_threshold, v.norm_tail_n
        ),
        norm.frequency,
        0.0,
        norm.trials,
    ));
    reports.push(beta_projection_check(v.beta_dim, v.beta_trials, &rng.substream(5))?);

    for (zi, &z) in cfg.z_values.iter().enumerate() {
        let zrng = rng.substream(100 + zi as u64);
        let with_z = |base: &LemmaCheckConfig| LemmaCheckConfig { z, ..base.clone() };
        let tag = |mut r: LemmaReport| {
            r.description = format!("{} [z = {z}]", r.description);
            r
        };
        reports.extend(lemma_suite_regime_n(&with_z(&v.regime_n), &zrng)?.into_iter().map(tag));
        reports.extend(lemma_suite_regime_k(&with_z(&v.regime_k), &zrng)?.into_iter().map(tag));
    }

    let deterministic_violations = reports.iter().filter(|r| r.deterministic).map(|r| r.violations).sum();
    let probabilistic_violations = reports.iter().filter(|r| !r.deterministic).map(|r| r.violations).sum();
    for r in &reports {
        log::info!(
            "{}: {} violations, min margin {:.3e}",
            r.lemma_id,
            r.violations,
            r.min_margin()
        );
    }
    Ok(VerificationResult {
        schema_version: RESULT_SCHEMA_VERSION,
        seed: cfg.seed,
        reports,
        deterministic_violations,
        probabilistic_violations,
    })
}
