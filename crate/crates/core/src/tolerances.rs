//! Numerical tolerances shared by the linear-algebra kernel, the theorem
//! checkers and the test suites.
//!
//! Every threshold used to decide "zero", "converged" or "violated" lives
//! here so that a property test and the checker it exercises can never drift
//! apart.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative SVD reconstruction bound: `‖UΣV − X‖_F ≤ svd_reconstruction · (m + n) · σ₁`.
    pub svd_reconstruction: f64,
    /// Multiplier on `max(m, n) · eps · σ₁` below which a singular value counts as zero.
    pub rank_eps_multiplier: f64,
    /// A Woodbury capacitance matrix `I + V A⁻¹ U` is rejected when
    /// `σ_min ≤ woodbury_capacitance_rtol · σ₁`.
    pub woodbury_capacitance_rtol: f64,
    /// Relative slack (times the largest singular value involved) granted to
    /// deterministic inequalities such as Thompson or Mirsky.
    pub deterministic_slack: f64,
    /// Relative slack for the norm inequalities `‖X‖ ≤ ‖X‖_F` and `‖X‖ ≤ sqrt(‖X‖₁‖X‖_∞)`.
    pub norm_inequality_slack: f64,
    /// Maximum number of diagonal-scaling sweeps in eigenvalue balancing.
    pub balance_max_sweeps: usize,
    /// Multiplier on the one-sample KS null scale `1.63 / sqrt(samples)`
    /// used when a KS distance is turned into a pass/fail margin.
    pub ks_null_multiplier: f64,
}

impl Tolerances {
    pub const fn standard() -> Self {
        Self {
            svd_reconstruction: 1e-10,
            rank_eps_multiplier: 1.0,
            woodbury_capacitance_rtol: 1e-12,
            deterministic_slack: 1e-10,
            norm_inequality_slack: 1e-12,
            balance_max_sweeps: 100,
            ks_null_multiplier: 2.0,
        }
    }

    /// Numerical-rank cutoff for a `rows × cols` matrix with largest singular value `sigma_max`.
    pub fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_eps_multiplier * rows.max(cols) as f64 * f64::EPSILON * sigma_max
    }

    /// KS acceptance threshold for `samples` draws.
    pub fn ks_threshold(&self, samples: usize) -> f64 {
        self.ks_null_multiplier * 1.63 / (samples.max(1) as f64).sqrt()
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::standard()
    }
}

/// The process-wide default tolerance record.
pub const TOLERANCES: Tolerances = Tolerances::standard();
