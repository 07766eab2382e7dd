//! Tail probabilities: closed-form bounds and Monte Carlo estimates.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{LemmaReport, Result, VerifyError};
use crate::esd::ks_statistic;
use crate::linalg::{singular_values, spectral_norm, DenseMatrix};
use crate::rng::{gaussian_matrix, uniform_unit_vector, RngStream};
use crate::tolerances::TOLERANCES;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// `min(bound, 1)`.
    pub value: f64,
    /// Natural log of the uncapped bound (`-inf` for `τ = 0`).
    pub log_value: f64,
    /// The uncapped bound exceeded 1.
    pub capped: bool,
}

/// Bound on `P(σ_n(R) ≤ τ)` for `R = R_D + G`, `R` of size `n × N`, `G` with
/// i.i.d. complex Gaussian entries of variance `1/n`:
///
/// `τ^{2m} / √(2π) · (n N e²)^m / m^{2m + 1/2}`, `m = N − n + 1`,
///
/// evaluated in log space.
pub fn pseudoinverse_tail_bound(n: usize, big_n: usize, tau: f64) -> Result<TailBound> {
    if n == 0 || big_n < n {
        return Err(VerifyError::InvalidConfig(format!(
            "need N >= n >= 1, got n = {n}, N = {big_n}"
        )));
    }
    if !(tau >= 0.0) {
        return Err(VerifyError::InvalidConfig(format!(
            "tau must be nonnegative, got {tau}"
        )));
    }
    if tau == 0.0 {
        return Ok(TailBound {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            capped: false,
        });
    }
    let m = (big_n - n + 1) as f64;
    let log_value =
        2.0 * m * tau.ln() - 0.5 * (2.0 * PI).ln() + m * ((n * big_n) as f64).ln() + 2.0 * m - (2.0 * m + 0.5) * m.ln();
    let capped = log_value > 0.0;
    Ok(TailBound {
        value: if capped { 1.0 } else { log_value.exp() },
        log_value,
        capped,
    })
}

/// `3 · sqrt(p (1 − p) / trials)`.
pub fn binomial_allowance(p: f64, trials: usize) -> f64 {
    3.0 * (p * (1.0 - p) / trials.max(1) as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub events: usize,
    pub trials: usize,
    pub frequency: f64,
}

impl TailEstimate {
    fn from_flags(flags: &[bool]) -> Self {
        let events = flags.iter().filter(|&&f| f).count();
        Self {
            events,
            trials: flags.len(),
            frequency: events as f64 / flags.len().max(1) as f64,
        }
    }

    /// `frequency ≤ bound + 3·sqrt(bound (1 − bound) / trials)`.
    pub fn consistent_with(&self, bound: f64) -> bool {
        self.frequency <= bound + binomial_allowance(bound, self.trials)
    }
}

/// Fraction of trials with `σ_n(R_D + G) ≤ τ`, `G` with variance-`1/n` entries.
/// Trial `i` draws from `rng.substream(i)`.
pub fn mc_pseudoinverse_tail(
    n: usize,
    big_n: usize,
    tau: f64,
    r_deterministic: &DenseMatrix,
    trials: usize,
    rng: &RngStream,
) -> Result<TailEstimate> {
    if n == 0 || big_n < n {
        return Err(VerifyError::InvalidConfig(format!(
            "need N >= n >= 1, got n = {n}, N = {big_n}"
        )));
    }
    if r_deterministic.shape() != (n, big_n) {
        return Err(VerifyError::InvalidConfig(format!(
            "deterministic part must be {n}x{big_n}, got {}x{}",
            r_deterministic.rows(),
            r_deterministic.cols()
        )));
    }
    let flags: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let g = gaussian_matrix(&mut rng.substream(i).generator(), n, big_n, 1.0 / n as f64);
            let r = r_deterministic.try_add(&g)?;
            Ok(singular_values(&r)?[n - 1] <= tau)
        })
        .collect::<Result<_>>()?;
    Ok(TailEstimate::from_flags(&flags))
}

/// Fraction of `n × n` standard complex Gaussian matrices with `‖G‖ > a √n`.
pub fn gaussian_norm_tail(n: usize, a_threshold: f64, trials: usize, rng: &RngStream) -> Result<TailEstimate> {
    if !(a_threshold > 0.0) || n == 0 {
        return Err(VerifyError::InvalidConfig(
            "need n >= 1 and a positive threshold".into(),
        ));
    }
    let limit = a_threshold * (n as f64).sqrt();
    let flags: Vec<bool> = (0..trials as u64)
        .into_par_iter()
        .map(|i| Ok(spectral_norm(&rng.substream(i).gaussian_matrix(n, n, 1.0))? > limit))
        .collect::<Result<_>>()?;
    Ok(TailEstimate::from_flags(&flags))
}

/// CDF of `|v₁|²` for `v` uniform on the unit sphere of `ℂᴺ`: `1 − (1 − λ)^{N−1}`.
pub fn beta_projection_cdf(big_n: usize, lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else if lambda >= 1.0 {
        1.0
    } else {
        1.0 - (1.0 - lambda).powi(big_n as i32 - 1)
    }
}

/// KS distance between sampled `|v₁|²` and [`beta_projection_cdf`]. Single
/// margin: `ks_threshold(trials) − KS`.
pub fn beta_projection_check(big_n: usize, trials: usize, rng: &RngStream) -> Result<LemmaReport> {
    if big_n < 2 || trials == 0 {
        return Err(VerifyError::InvalidConfig(format!(
            "need N >= 2 and trials >= 1, got N = {big_n}, trials = {trials}"
        )));
    }
    let mut g = rng.generator();
    let mut samples: Vec<f64> = (0..trials)
        .map(|_| uniform_unit_vector(&mut g, big_n)[0].norm_sqr())
        .collect();
    let ks = ks_statistic(&mut samples, |x| beta_projection_cdf(big_n, x));
    Ok(LemmaReport::new(
        "beta-projection",
        format!("KS of |v_1|^2 against 1 - (1 - x)^(N-1), N = {big_n}, {trials} draws"),
        false,
        vec![TOLERANCES.ks_threshold(trials) - ks],
        vec![ks],
    ))
}
