use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{HarnessError, Result};
use crate::esd::DistanceSettings;
use crate::verify::LemmaCheckConfig;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `k` fixed, `n` growing, eigenvalues scaled by `n^{-1/2}`.
    GrowN,
    /// `n` fixed, `k` growing, unscaled.
    GrowK,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::GrowN => "grow-n",
            Regime::GrowK => "grow-k",
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "grow-n" => Ok(Regime::GrowN),
            "grow-k" => Ok(Regime::GrowK),
            other => Err(format!("unknown regime `{other}` (expected grow-n or grow-k)")),
        }
    }
}

/// What [`export_result`](super::export_result) writes besides the result JSON:
/// `csv` adds one points file per cell, `svg` adds the points files and a
/// scatter plot per cell, `json` writes the result JSON alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "svg" => Ok(OutputFormat::Svg),
            other => Err(format!("unknown format `{other}` (expected csv, json or svg)")),
        }
    }
}

/// Settings for [`run_verification`](super::run_verification).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifySettings {
    /// Constants and `(n, k)` cells for the growing-`n` checks; `z` is taken from `z_values`.
    pub regime_n: LemmaCheckConfig,
    /// Constants and `(n, k)` cells for the growing-`k` checks; `z` is taken from `z_values`.
    pub regime_k: LemmaCheckConfig,
    pub theorem_instances: usize,
    pub theorem_dim: usize,
    pub tail_trials: usize,
    pub tail_tau: f64,
    /// `(n, N)` of the pseudoinverse tail check.
    pub tail_shape: (usize, usize),
    /// Spectral norm of the fixed deterministic part in the second tail run.
    pub tail_deterministic_norm: f64,
    pub norm_tail_n: usize,
    pub norm_tail_threshold: f64,
    pub norm_tail_trials: usize,
    pub beta_dim: usize,
    pub beta_trials: usize,
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            regime_n: LemmaCheckConfig::default(),
            regime_k: LemmaCheckConfig {
                sizes: vec![(2, 8), (2, 32), (2, 128)],
                ..LemmaCheckConfig::default()
            },
            theorem_instances: 1000,
            theorem_dim: 8,
            tail_trials: 100_000,
            tail_tau: 0.1,
            tail_shape: (2, 6),
            tail_deterministic_norm: 5.0,
            norm_tail_n: 32,
            norm_tail_threshold: 3.0,
            norm_tail_trials: 1000,
            beta_dim: 6,
            beta_trials: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub regime: Regime,
    pub n_values: Vec<usize>,
    pub k_values: Vec<usize>,
    /// Points per cell; trials per cell are `⌈target_points / (kn)⌉` so that
    /// `k·n·trials` stays roughly constant across cells.
    pub target_points: usize,
    /// Fixed trial count per cell, overriding `target_points`.
    pub trials: Option<usize>,
    pub seed: u64,
    pub z_values: Vec<Complex64>,
    pub atom_radius: f64,
    pub exclusion_radius: f64,
    pub radial_bins: usize,
    pub angular_bins: usize,
    /// Half-width `w` of the annulus `||λ| − 1| ≤ w` reported in the growing-`k` regime.
    pub annulus_halfwidth: f64,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    pub verify: VerifySettings,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::grow_n_default()
    }
}

impl ExperimentConfig {
    /// `k = 4`, `n ∈ {32, 64, 128}`, about 20000 points per cell.
    pub fn grow_n_default() -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            regime: Regime::GrowN,
            n_values: vec![32, 64, 128],
            k_values: vec![4],
            target_points: 20_000,
            trials: None,
            seed: 1,
            z_values: vec![Complex64::new(0.7, 0.3), Complex64::new(0.5, 0.0)],
            atom_radius: 0.2,
            exclusion_radius: 0.5,
            radial_bins: 8,
            angular_bins: 16,
            annulus_halfwidth: 0.1,
            output_dir: PathBuf::from("out"),
            format: OutputFormat::Csv,
            verify: VerifySettings::default(),
        }
    }

    /// `n = 4`, `k ∈ {32, 128, 512}`, 2048 points per cell (one trial at `k = 512`).
    pub fn grow_k_default() -> Self {
        Self {
            regime: Regime::GrowK,
            n_values: vec![4],
            k_values: vec![32, 128, 512],
            target_points: 2048,
            ..Self::grow_n_default()
        }
    }

    pub fn default_for(regime: Regime) -> Self {
        match regime {
            Regime::GrowN => Self::grow_n_default(),
            Regime::GrowK => Self::grow_k_default(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| HarnessError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// `(n, k)` cells in run order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        match self.regime {
            Regime::GrowN => self.n_values.iter().map(|&n| (n, self.k_values[0])).collect(),
            Regime::GrowK => self.k_values.iter().map(|&k| (self.n_values[0], k)).collect(),
        }
    }

    pub fn distance_settings(&self) -> DistanceSettings {
        DistanceSettings {
            atom_radius: self.atom_radius,
            exclusion_radius: self.exclusion_radius,
            radial_bins: self.radial_bins,
            angular_bins: self.angular_bins,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return bad(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        match self.regime {
            Regime::GrowN if self.k_values.len() != 1 || self.n_values.is_empty() => {
                return bad("grow-n needs exactly one k value and at least one n value".into())
            }
            Regime::GrowK if self.n_values.len() != 1 || self.k_values.is_empty() => {
                return bad("grow-k needs exactly one n value and at least one k value".into())
            }
            _ => {}
        }
        if self.n_values.contains(&0) || self.k_values.contains(&0) {
            return bad("n and k values must be positive".into());
        }
        if self.trials == Some(0) {
            return bad("trials must be at least 1".into());
        }
        if self.trials.is_none() {
            for (n, k) in self.cells() {
                if n * k > self.target_points {
                    return bad(format!(
                        "cell n = {n}, k = {k} is infeasible: kn = {} exceeds target_points = {}",
                        n * k,
                        self.target_points
                    ));
                }
            }
        }
        if !(self.atom_radius > 0.0) || !(self.exclusion_radius >= 0.0) || !(self.annulus_halfwidth > 0.0) {
            return bad("atom_radius and annulus_halfwidth must be positive, exclusion_radius nonnegative".into());
        }
        if self.radial_bins == 0 || self.angular_bins == 0 {
            return bad("bin counts must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ExperimentConfig::grow_n_default().validate().unwrap();
        ExperimentConfig::grow_k_default().validate().unwrap();
        assert_eq!(
            ExperimentConfig::grow_k_default().cells(),
            vec![(4, 32), (4, 128), (4, 512)]
        );
    }

    #[test]
    fn infeasible_cell_rejected() {
        let cfg = ExperimentConfig {
            target_points: 100,
            ..ExperimentConfig::grow_n_default()
        };
        let err = cfg.validate().unwrap_err();
        assert!(err.to_string().contains("infeasible"));
        let fixed = ExperimentConfig { trials: Some(1), ..cfg };
        fixed.validate().unwrap();
    }

    #[test]
    fn regime_shape_enforced() {
        let cfg = ExperimentConfig {
            k_values: vec![2, 4],
            ..ExperimentConfig::grow_n_default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn json_round_trip_and_partial_files() {
        let cfg = ExperimentConfig::grow_k_default();
        let back: ExperimentConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        let partial: ExperimentConfig = serde_json::from_str(r#"{"seed": 9, "regime": "grow-n"}"#).unwrap();
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.n_values, vec![32, 64, 128]);
    }
}
