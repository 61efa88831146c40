//! Sample-optimal learners built on mollified Fourier truncation.

mod fft;
mod ksiirv;
mod mollifier;
mod pbd;

pub use fft::convolve_fft;
pub use ksiirv::{
    arc_centers, enumerate_scale_guesses, guess_count, learn_ksiirv_optimal, ScaleGuess,
};
pub use mollifier::{fhat_values, mollifier_values, MollifierSpec};
pub use pbd::learn_pbd_optimal;

use crate::calibration::Calibration;
use crate::dist::Pmf;
use crate::error::{Error, Result};

/// `Y(p) = (1/N) Σ_i F(p − X_i)` on `[window.0, window.1]`, via one FFT convolution.
///
/// Linear in the empirical distribution of `samples`.
pub fn mollified_estimate(
    samples: &[i64],
    spec: &MollifierSpec,
    window: (i64, i64),
) -> Result<Pmf> {
    let z = Pmf::from_samples(samples)?;
    let (wlo, whi) = window;
    if whi < wlo {
        return Err(Error::InvalidArgument("empty window".into()));
    }
    let offsets: Vec<i64> = (wlo - z.hi()..=whi - z.lo()).collect();
    let f = mollifier_values(spec, &offsets);
    let conv = convolve_fft(z.values(), &f);
    let start = z.len() - 1;
    Ok(Pmf::new(
        wlo,
        conv[start..start + (whi - wlo + 1) as usize].to_vec(),
    ))
}

/// `√ln(1/ε)`.
fn root_log(epsilon: f64) -> f64 {
    (1.0 / epsilon).ln().sqrt()
}

/// `[μ̃ − W, μ̃ + W]` with `W = window_c · σ̃ √ln(1/ε)`.
fn output_window(mu: f64, sigma: f64, epsilon: f64, cal: &Calibration) -> (i64, i64) {
    let w = cal.window_c * sigma * root_log(epsilon);
    ((mu - w).floor() as i64, (mu + w).ceil() as i64)
}

fn range_check(samples: &[i64], sigma: f64, epsilon: f64, cal: &Calibration) -> Result<()> {
    let lo = samples.iter().min().copied().unwrap_or(0);
    let hi = samples.iter().max().copied().unwrap_or(0);
    let bound = cal.optimal_fail_mult * sigma * root_log(epsilon);
    if (hi - lo) as f64 > bound {
        return Err(Error::RangeCheckFailed {
            range: hi - lo,
            bound,
        });
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_equals_direct_sum() {
        let samples = vec![10, 12, 12, 15, 9, 11, 11, 11];
        let spec = MollifierSpec::single(3.0, 0.1, 1.0);
        let y = mollified_estimate(&samples, &spec, (2, 20)).unwrap();
        for p in 2..=20 {
            let direct: f64 = samples
                .iter()
                .map(|&x| mollifier_values(&spec, &[p - x])[0])
                .sum::<f64>()
                / samples.len() as f64;
            assert!((y.get(p) - direct).abs() < 1e-12);
        }
    }
}
