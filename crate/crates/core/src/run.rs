//! One entry point over every learner, used by the CLI, sweeps and the C API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::heavy_set_with_radius;
use crate::hypothesis::learn_heavy;
use crate::learn::{
    estimate_from_samples, estimate_mean_var, learn_empirical, learn_siirv, learn_sparse_ft,
    Branch, LearnConfig, LearnOutcome, LearnReport,
};
use crate::optimal::{learn_ksiirv_optimal, learn_pbd_optimal};
use crate::source::{Recording, SampleSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Sparse-Fourier learner with an empirical fallback for small variance.
    Fourier,
    /// Plain empirical distribution.
    Empirical,
    /// Sample-optimal learner for sums of Bernoullis.
    Optimal2,
    /// Sample-optimal learner for general k (k ≤ 6).
    Optimalk,
    /// Gaussian plus IRV candidates selected by tournament.
    Heavy,
    /// Empirical DFT on the heavy frequency set, without thresholding.
    Sparseft,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Fourier,
        Algorithm::Empirical,
        Algorithm::Optimal2,
        Algorithm::Optimalk,
        Algorithm::Heavy,
        Algorithm::Sparseft,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fourier => "fourier",
            Algorithm::Empirical => "empirical",
            Algorithm::Optimal2 => "optimal2",
            Algorithm::Optimalk => "optimalk",
            Algorithm::Heavy => "heavy",
            Algorithm::Sparseft => "sparseft",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown algorithm {s:?}")))
    }
}

/// Runs `algo` against `source`. The report's `N` is the total number of
/// draws taken, including mean/variance estimation and tournaments.
///
/// `Empirical` draws `config.sample_count()` samples unless `empirical_n` overrides it.
pub fn run_algorithm(
    algo: Algorithm,
    source: &mut dyn SampleSource,
    config: &LearnConfig,
    empirical_n: Option<usize>,
) -> Result<LearnOutcome> {
    config.validate()?;
    let cal = &config.calibration;
    let mut rec = Recording::new(source);
    let mut outcome = match algo {
        Algorithm::Fourier => learn_siirv(&mut rec, config)?,
        Algorithm::Optimal2 => learn_pbd_optimal(&mut rec, config.epsilon, cal)?,
        Algorithm::Optimalk => learn_ksiirv_optimal(&mut rec, config.k, config.epsilon, cal)?,
        Algorithm::Empirical => {
            let samples = rec.draw(empirical_n.unwrap_or_else(|| config.sample_count()))?;
            let est = estimate_from_samples(&samples, cal.mean_var_groups)?;
            LearnOutcome {
                hypothesis: learn_empirical(&samples)?,
                report: LearnReport::new(Branch::Empirical, 0, &est),
            }
        }
        Algorithm::Heavy => {
            let hypothesis = learn_heavy(&mut rec, config.k, config.epsilon, cal)?;
            let est = estimate_from_samples(rec.log(), cal.mean_var_groups)?;
            LearnOutcome {
                hypothesis,
                report: LearnReport::new(Branch::Tournament, 0, &est),
            }
        }
        Algorithm::Sparseft => {
            let est = estimate_mean_var(&mut rec, cal)?;
            let sigma = est.sigma_tilde();
            let m = config.modulus(sigma);
            let support = heavy_set_with_radius(m, config.k, config.heavy_radius(sigma))?;
            let samples = rec.draw(config.sample_count())?;
            let lo = est.mu_tilde.floor() as i64 - ((m - 1) / 2) as i64;
            let hypothesis = learn_sparse_ft(&samples, lo, lo + m as i64 - 1, &support)?;
            let mut report = LearnReport::new(Branch::Fourier, 0, &est);
            report.modulus = Some(m);
            report.support_size = Some(support.symmetrized().len());
            LearnOutcome { hypothesis, report }
        }
    };
    outcome.report.n_samples = rec.log().len();
    Ok(outcome)
}
