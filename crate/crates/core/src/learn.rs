//! Sample-based learners: the sparse-Fourier learner and its empirical fallback.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calibration::Calibration;
use crate::dist::Pmf;
use crate::error::{Error, Result};
use crate::fourier::{empirical_dft, heavy_set_with_radius, HeavySet, SparseDft};
use crate::hypothesis::Hypothesis;
use crate::source::SampleSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanVarEstimate {
    pub mu_tilde: f64,
    /// Estimates `Var + 1`, so never below 1.
    pub sigma_tilde_sq: f64,
}

impl MeanVarEstimate {
    pub fn sigma_tilde(&self) -> f64 {
        self.sigma_tilde_sq.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnConfig {
    pub epsilon: f64,
    pub k: usize,
    pub c_const: f64,
    pub seed: u64,
    #[serde(default)]
    pub calibration: Calibration,
}

impl LearnConfig {
    pub fn new(epsilon: f64, k: usize, seed: u64) -> Self {
        LearnConfig::with_calibration(epsilon, k, seed, Calibration::default())
    }

    pub fn with_calibration(epsilon: f64, k: usize, seed: u64, calibration: Calibration) -> Self {
        LearnConfig {
            epsilon,
            k,
            c_const: calibration.learn_c,
            seed,
            calibration,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0,1), got {}",
                self.epsilon
            )));
        }
        if self.c_const < 1.0 {
            return Err(Error::InvalidArgument(format!(
                "C must be at least 1, got {}",
                self.c_const
            )));
        }
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        Ok(())
    }

    /// `N = C³k/ε² · ln²(k/ε)`.
    pub fn sample_count(&self) -> usize {
        let (k, eps) = (self.k as f64, self.epsilon);
        let l = (k / eps).ln();
        (self.calibration.learn_sample_mult * self.c_const.powi(3) * k / (eps * eps) * l * l).ceil()
            as usize
    }

    /// Fourier branch only above `σ̃ = 4k ln(4/ε)`.
    pub fn small_sigma_threshold(&self) -> f64 {
        self.calibration.learn_small_branch_mult * 4.0 * self.k as f64 * (4.0 / self.epsilon).ln()
    }

    /// `M = 1 + 2⌈6σ̃√ln(4/ε)⌉`.
    pub fn modulus(&self, sigma_tilde: f64) -> u64 {
        let half = self.calibration.learn_modulus_mult
            * 6.0
            * sigma_tilde
            * (4.0 / self.epsilon).ln().sqrt();
        1 + 2 * half.ceil() as u64
    }

    /// `R = 2ε / (C √(k ln(k/ε)))`.
    pub fn threshold(&self) -> f64 {
        let k = self.k as f64;
        self.calibration.learn_threshold_mult * 2.0 * self.epsilon
            / (self.c_const * (k * (k / self.epsilon).ln()).sqrt())
    }

    /// Arc radius around each `a/b` that catches every `|P̂(ξ)| ≥ R`.
    pub fn heavy_radius(&self, sigma_tilde: f64) -> f64 {
        self.calibration.learn_radius_mult * (2.0 / self.threshold()).ln().sqrt() * 2.0
            / sigma_tilde
    }
}

/// Median-of-means mean and plug-in variance from a handful of draws.
pub fn estimate_mean_var(
    source: &mut dyn SampleSource,
    cal: &Calibration,
) -> Result<MeanVarEstimate> {
    let samples = source.draw(cal.mean_var_samples)?;
    estimate_from_samples(&samples, cal.mean_var_groups)
}

pub fn estimate_from_samples(samples: &[i64], groups: usize) -> Result<MeanVarEstimate> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let xs: Vec<f64> = samples.iter().map(|&x| x as f64).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let g = groups.clamp(1, xs.len());
    let size = xs.len() / g;
    let mut means: Vec<f64> = xs
        .chunks(size)
        .take(g)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    Ok(MeanVarEstimate {
        mu_tilde: means[means.len() / 2],
        sigma_tilde_sq: var + 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Empirical,
    Fourier,
    Mollified,
    Gaussian,
    Tournament,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnReport {
    pub branch: Branch,
    #[serde(rename = "M")]
    pub modulus: Option<u64>,
    #[serde(rename = "|S|")]
    pub support_size: Option<usize>,
    #[serde(rename = "N")]
    pub n_samples: usize,
    #[serde(rename = "sigma_tilde")]
    pub sigma_tilde: f64,
    #[serde(rename = "mu_tilde")]
    pub mu_tilde: f64,
    /// Output window of the mollified learners.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<(i64, i64)>,
    /// Scale `m` of the winning guess (k-SIIRV learner).
    #[serde(rename = "m", skip_serializing_if = "Option::is_none", default)]
    pub scale: Option<usize>,
    /// Weights `w_m..w_2m` of the winning guess.
    #[serde(rename = "w", skip_serializing_if = "Option::is_none", default)]
    pub weights: Option<Vec<f64>>,
}

impl LearnReport {
    pub fn new(branch: Branch, n_samples: usize, est: &MeanVarEstimate) -> Self {
        LearnReport {
            branch,
            modulus: None,
            support_size: None,
            n_samples,
            sigma_tilde: est.sigma_tilde(),
            mu_tilde: est.mu_tilde,
            window: None,
            scale: None,
            weights: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LearnOutcome {
    pub hypothesis: Hypothesis,
    pub report: LearnReport,
}

pub fn learn_empirical(samples: &[i64]) -> Result<Hypothesis> {
    Ok(Hypothesis::Empirical(Pmf::from_samples(samples)?))
}

/// Keeps `Q̂(ξ)` for ξ in `S` with `|Q̂(ξ)| ≥ R` (ξ = 0 always), preserving conjugate symmetry.
fn thresholded(q: &SparseDft, threshold: f64) -> BTreeMap<u64, Complex64> {
    let m = q.modulus();
    let mut out = BTreeMap::new();
    for (&xi, &z) in q.entries() {
        let mirror = (m - xi) % m;
        if xi > mirror {
            continue;
        }
        if xi == 0 || z.norm() >= threshold {
            out.insert(xi, z);
            if mirror != xi {
                out.insert(mirror, z.conj());
            }
        }
    }
    out
}

/// Six-step sparse-Fourier learner.
pub fn learn_siirv(source: &mut dyn SampleSource, config: &LearnConfig) -> Result<LearnOutcome> {
    config.validate()?;
    let est = estimate_mean_var(source, &config.calibration)?;
    let n = config.sample_count();
    let samples = source.draw(n)?;
    let sigma = est.sigma_tilde();
    let mut report = LearnReport::new(Branch::Empirical, n, &est);
    if sigma <= config.small_sigma_threshold() {
        return Ok(LearnOutcome {
            hypothesis: learn_empirical(&samples)?,
            report,
        });
    }
    let m = config.modulus(sigma);
    let r = config.threshold();
    let support = heavy_set_with_radius(m, config.k, config.heavy_radius(sigma))?.symmetrized();
    let q = empirical_dft(&samples, m, &support)?;
    let entries = thresholded(&q, r);
    let window_lo = est.mu_tilde.floor() as i64 - ((m - 1) / 2) as i64;
    report.branch = Branch::Fourier;
    report.modulus = Some(m);
    report.support_size = Some(support.len());
    Ok(LearnOutcome {
        hypothesis: Hypothesis::SparseFourier(SparseDft::new(m, window_lo, entries)?),
        report,
    })
}

/// Empirical DFT restricted to `S`, inverted onto `T = [t_lo, t_hi]` with modulus `|T|`.
pub fn learn_sparse_ft(
    samples: &[i64],
    t_lo: i64,
    t_hi: i64,
    support: &HeavySet,
) -> Result<Hypothesis> {
    if t_hi < t_lo {
        return Err(Error::InvalidArgument("empty interval".into()));
    }
    let m = (t_hi - t_lo + 1) as u64;
    if support.modulus() != m {
        return Err(Error::InvalidArgument(format!(
            "frequency set has modulus {}, interval has length {m}",
            support.modulus()
        )));
    }
    let q = empirical_dft(samples, m, &support.symmetrized())?;
    let entries = thresholded(&q, 0.0);
    Ok(Hypothesis::SparseFourier(SparseDft::new(m, t_lo, entries)?))
}
