//! Frozen constants for every unspecified `O(·)` in the algorithms.
//!
//! The defaults are the values the acceptance suite was run with. A JSON file
//! with any subset of the fields overrides them; the CLI reads its path from
//! `SIIRV_CALIBRATION`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CALIBRATION_ENV: &str = "SIIRV_CALIBRATION";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    /// The universal constant `C` of the sparse-Fourier learner.
    pub learn_c: f64,
    /// Draws spent on the initial mean/variance estimate.
    pub mean_var_samples: usize,
    /// Number of groups for the median-of-means estimate.
    pub mean_var_groups: usize,
    pub learn_sample_mult: f64,
    pub learn_small_branch_mult: f64,
    pub learn_modulus_mult: f64,
    pub learn_threshold_mult: f64,
    pub learn_radius_mult: f64,

    /// Multiplier on `√ln(1/ε)/ε²` for the mollified learners.
    pub optimal_sample_mult: f64,
    /// Interval radius constant of the mollifier.
    pub mollifier_c: f64,
    /// Half-width constant of the output window, in units of `σ̃√ln(1/ε)`.
    pub window_c: f64,
    /// Empirical fallback when `σ̃ ≤ this · √ln(1/ε)` (times `k` for k-SIIRVs).
    pub optimal_small_mult: f64,
    /// Discretized-normal branch when `σ̃ ≥ this / ε`.
    pub optimal_huge_mult: f64,
    /// Fail when the sample range exceeds `this · σ̃√ln(1/ε)`.
    pub optimal_fail_mult: f64,
    /// Draws for the discretized-normal fit, times `1/ε²`.
    pub gaussian_sample_mult: f64,
    /// `C′` in the scale-guess weights.
    pub c_prime: f64,

    /// Tournament draws, times `ln(#candidates)/ε²`.
    pub tournament_sample_mult: f64,
    /// `learn_heavy` is valid above `this · k⁴/ε²` variance.
    pub heavy_variance_mult: f64,
    /// Draws per modulus guess `c`, times `c/ε²`.
    pub heavy_sample_mult: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration {
            learn_c: 2.0,
            mean_var_samples: 200,
            mean_var_groups: 5,
            learn_sample_mult: 1.0,
            learn_small_branch_mult: 1.0,
            learn_modulus_mult: 1.0,
            learn_threshold_mult: 1.0,
            learn_radius_mult: 1.0,
            optimal_sample_mult: 8.0,
            mollifier_c: 2.0,
            window_c: 4.0,
            optimal_small_mult: 8.0,
            optimal_huge_mult: 10.0,
            optimal_fail_mult: 16.0,
            gaussian_sample_mult: 4.0,
            c_prime: 1.0,
            tournament_sample_mult: 4.0,
            heavy_variance_mult: 100.0,
            heavy_sample_mult: 4.0,
        }
    }
}

impl Calibration {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
    }

    /// Defaults, overridden by the file named in `SIIRV_CALIBRATION` if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var_os(CALIBRATION_ENV) {
            Some(p) => Calibration::from_file(Path::new(&p)),
            None => Ok(Calibration::default()),
        }
    }
}
