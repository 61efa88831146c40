//! High-variance learner: `X ≈ cZ + Y` with `Y = X mod c` learned empirically.

use super::{tournament, DiscretizedNormal, GaussianPlusIrv, Hypothesis};
use crate::calibration::Calibration;
use crate::dist::Pmf;
use crate::error::{Error, Result};
use crate::source::SampleSource;

/// Variance above which `learn_heavy` is expected to succeed.
pub fn heavy_variance_threshold(k: usize, epsilon: f64, cal: &Calibration) -> f64 {
    cal.heavy_variance_mult * (k as f64).powi(4) / (epsilon * epsilon)
}

fn plug_in(samples: &[i64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().map(|&x| x as f64).sum::<f64>() / n;
    let var = samples
        .iter()
        .map(|&x| (x as f64 - mean).powi(2))
        .sum::<f64>()
        / n;
    (mean, var)
}

/// One `cZ + Y` candidate per `c ∈ 1..k-1`, then a tournament.
///
/// `Z` is centered and scaled so that `cZ + Y` reproduces the fitted mean and
/// variance of `X` given the learned `Y`.
pub fn learn_heavy(
    source: &mut dyn SampleSource,
    k: usize,
    epsilon: f64,
    cal: &Calibration,
) -> Result<Hypothesis> {
    if k < 2 || !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need k >= 2 and 0 < eps < 1, got k={k}, eps={epsilon}"
        )));
    }
    let eps2 = epsilon * epsilon;
    let fit = source.draw((cal.gaussian_sample_mult / eps2).ceil() as usize)?;
    let (mu, var) = plug_in(&fit);
    let mut candidates = Vec::with_capacity(k - 1);
    for c in 1..k {
        let draws = source.draw((cal.heavy_sample_mult * c as f64 / eps2).ceil() as usize)?;
        let residues: Vec<i64> = draws.iter().map(|x| x.rem_euclid(c as i64)).collect();
        let y = Pmf::from_samples(&residues)?.restrict(0, c as i64 - 1);
        let cf = c as f64;
        let z = DiscretizedNormal::new(
            (mu - y.mean()) / cf,
            (var - y.variance()).max(0.0) / (cf * cf),
        );
        candidates.push(Hypothesis::GaussianPlusIrv(GaussianPlusIrv::new(c, z, y)?));
    }
    Ok(tournament(&candidates, source, epsilon, cal)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{exact_pmf, scaled_binomial_model, tv_distance};
    use crate::rng::stream;
    use crate::source::ModelSource;

    #[test]
    fn doubled_binomial_picks_c2() {
        let model = scaled_binomial_model(400, 0.5, 2).unwrap();
        let truth = exact_pmf(&model);
        let mut src = ModelSource::new(model, stream(11, 0));
        let h = learn_heavy(&mut src, 3, 0.1, &Calibration::default()).unwrap();
        let Hypothesis::GaussianPlusIrv(g) = &h else {
            panic!("wrong variant")
        };
        assert_eq!(g.c(), 2);
        assert_eq!(g.remainder().values(), &[1.0, 0.0]);
        assert!(tv_distance(&h.to_pmf(), &truth) < 0.1);
    }
}
