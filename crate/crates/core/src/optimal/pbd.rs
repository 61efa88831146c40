use super::{
    check_epsilon, mollified_estimate, output_window, range_check, root_log, MollifierSpec,
};
use crate::calibration::Calibration;
use crate::dist::Pmf;
use crate::error::Result;
use crate::hypothesis::{DiscretizedNormal, GaussianPlusIrv, Hypothesis};
use crate::learn::{estimate_mean_var, Branch, LearnOutcome, LearnReport};
use crate::source::SampleSource;

/// Learner for sums of Bernoullis with `O(√ln(1/ε)/ε²)` samples.
pub fn learn_pbd_optimal(
    source: &mut dyn SampleSource,
    epsilon: f64,
    cal: &Calibration,
) -> Result<LearnOutcome> {
    check_epsilon(epsilon)?;
    let est = estimate_mean_var(source, cal)?;
    let sigma = est.sigma_tilde();
    let eps2 = epsilon * epsilon;

    if sigma >= cal.optimal_huge_mult / epsilon {
        let n = (cal.gaussian_sample_mult / eps2).ceil() as usize;
        let s = source.draw(n)?;
        let mean = s.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
        let var = s.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n as f64;
        let g = GaussianPlusIrv::new(1, DiscretizedNormal::new(mean, var), Pmf::point_mass(0))?;
        return Ok(LearnOutcome {
            hypothesis: Hypothesis::GaussianPlusIrv(g),
            report: LearnReport::new(Branch::Gaussian, n, &est),
        });
    }

    let n = (cal.optimal_sample_mult * root_log(epsilon) / eps2).ceil() as usize;
    let samples = source.draw(n)?;
    let mut report = LearnReport::new(Branch::Empirical, n, &est);
    if sigma <= cal.optimal_small_mult * root_log(epsilon) {
        return Ok(LearnOutcome {
            hypothesis: Hypothesis::Empirical(Pmf::from_samples(&samples)?),
            report,
        });
    }
    range_check(&samples, sigma, epsilon, cal)?;
    let spec = MollifierSpec::single(sigma, epsilon, cal.mollifier_c);
    let window = output_window(est.mu_tilde, sigma, epsilon, cal);
    let y = mollified_estimate(&samples, &spec, window)?;
    report.branch = Branch::Mollified;
    report.window = Some(window);
    Ok(LearnOutcome {
        hypothesis: Hypothesis::Mollified(y),
        report,
    })
}
