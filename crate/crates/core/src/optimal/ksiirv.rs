//! Guess-and-tournament learner for general k.
//!
//! Each guess fixes a scale `m` and weights `w_m..w_2m`; the Fourier transform
//! is then small away from the minimizers of `Σ w_j [jξ]²` on arcs of length
//! `1/(6m)`, and a mollifier keeps only neighborhoods of those minimizers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_epsilon, mollified_estimate, output_window, range_check, root_log, MollifierSpec,
};
use crate::calibration::Calibration;
use crate::dist::Pmf;
use crate::error::{Error, Result};
use crate::hypothesis::{tournament, Hypothesis};
use crate::learn::{estimate_mean_var, Branch, LearnOutcome, LearnReport};
use crate::source::SampleSource;

/// Largest `k` the learner accepts; the guess count grows like `4^k`.
pub const MAX_K: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGuess {
    pub m: usize,
    /// `w[i]` is the weight of `j = m + i`.
    pub w: Vec<f64>,
}

impl ScaleGuess {
    fn objective(&self, xi: f64) -> f64 {
        self.w
            .iter()
            .enumerate()
            .map(|(i, &w)| {
                let t = (self.m + i) as f64 * xi;
                w * (t - t.round()).powi(2)
            })
            .sum()
    }
}

fn scales(k: usize) -> impl Iterator<Item = usize> {
    (0..).map(|e| 1usize << e).take_while(move |&m| m <= k)
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn binomial(n: usize, r: usize) -> usize {
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Closed-form size of `enumerate_scale_guesses(_, k)`: `Σ_m C(2m+1, m)`.
pub fn guess_count(k: usize) -> usize {
    scales(k).map(|m| binomial(2 * m + 1, m)).sum()
}

/// All weight vectors `w_j = (a_j/(m+1)) · C′(σ̃/k)²/2` with `Σ a_j = m + 1`,
/// for every power of two `m ≤ k`.
pub fn enumerate_scale_guesses(sigma_tilde: f64, k: usize, c_prime: f64) -> Vec<ScaleGuess> {
    let budget = c_prime * (sigma_tilde / k as f64).powi(2) / 2.0;
    let mut out = Vec::new();
    for m in scales(k) {
        let mut comps = Vec::new();
        compositions(m + 1, m + 1, &mut Vec::new(), &mut comps);
        let quantum = budget / (m + 1) as f64;
        out.extend(comps.into_iter().map(|a| ScaleGuess {
            m,
            w: a.iter().map(|&x| x as f64 * quantum).collect(),
        }));
    }
    out
}

/// The minimizer of `Σ w_j [jξ]²` on each arc `[i/6m, (i+1)/6m]`, lowest ξ on ties.
///
/// On each piece between breakpoints (multiples of `1/(2j)`) the nearest integer
/// to every `jξ` is fixed, so the objective is one quadratic whose minimizer is
/// clamped to the piece.
pub fn arc_centers(guess: &ScaleGuess) -> Vec<f64> {
    let arcs = 6 * guess.m;
    let active: Vec<(f64, f64)> = guess
        .w
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .map(|(i, &w)| ((guess.m + i) as f64, w))
        .collect();
    (0..arcs)
        .map(|i| {
            let (lo, hi) = (i as f64 / arcs as f64, (i + 1) as f64 / arcs as f64);
            let mut cuts = vec![lo, hi];
            for &(j, _) in &active {
                let first = (lo * 2.0 * j).ceil() as i64;
                let last = (hi * 2.0 * j).floor() as i64;
                cuts.extend(
                    (first..=last)
                        .map(|t| t as f64 / (2.0 * j))
                        .filter(|&c| c > lo && c < hi),
                );
            }
            cuts.sort_by(f64::total_cmp);
            let mut cands = cuts.clone();
            for pair in cuts.windows(2) {
                let (a, b) = (pair[0], pair[1]);
                let mid = 0.5 * (a + b);
                let (mut num, mut den) = (0.0, 0.0);
                for &(j, w) in &active {
                    let n = (j * mid).round();
                    num += w * j * n;
                    den += w * j * j;
                }
                if den > 0.0 {
                    cands.push((num / den).clamp(a, b));
                }
            }
            let mut best = (f64::INFINITY, lo);
            for c in cands {
                let v = guess.objective(c);
                if v < best.0 || (v == best.0 && c < best.1) {
                    best = (v, c);
                }
            }
            best.1
        })
        .collect()
}

/// Empirical below `σ̃ ≈ k√ln(1/ε)`; otherwise one mollified candidate per
/// distinct guess, selected by tournament.
pub fn learn_ksiirv_optimal(
    source: &mut dyn SampleSource,
    k: usize,
    epsilon: f64,
    cal: &Calibration,
) -> Result<LearnOutcome> {
    check_epsilon(epsilon)?;
    if k > MAX_K {
        return Err(Error::Unsupported(format!(
            "k={k} exceeds the supported maximum of {MAX_K}"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let est = estimate_mean_var(source, cal)?;
    let sigma = est.sigma_tilde();
    let kf = k as f64;
    let n =
        (cal.optimal_sample_mult * kf * root_log(epsilon) / (epsilon * epsilon)).ceil() as usize;
    let samples = source.draw(n)?;
    let mut report = LearnReport::new(Branch::Empirical, n, &est);
    if sigma <= cal.optimal_small_mult * kf * root_log(epsilon) {
        return Ok(LearnOutcome {
            hypothesis: Hypothesis::Empirical(Pmf::from_samples(&samples)?),
            report,
        });
    }
    range_check(&samples, sigma, epsilon, cal)?;
    let window = output_window(est.mu_tilde, sigma, epsilon, cal);

    let mut guesses: Vec<(ScaleGuess, Vec<f64>)> = Vec::new();
    for g in enumerate_scale_guesses(sigma, k, cal.c_prime) {
        let centers = arc_centers(&g);
        if !guesses.iter().any(|(h, c)| h.m == g.m && *c == centers) {
            guesses.push((g, centers));
        }
    }
    let candidates: Vec<Hypothesis> = guesses
        .par_iter()
        .map(|(g, centers)| {
            let radius = cal.mollifier_c * kf * root_log(epsilon) / (g.m as f64 * sigma);
            let spec = MollifierSpec::multi(sigma, epsilon, cal.mollifier_c, centers, radius);
            mollified_estimate(&samples, &spec, window).map(Hypothesis::Mollified)
        })
        .collect::<Result<_>>()?;
    let (idx, winner) = tournament(&candidates, source, epsilon, cal)?;
    report.branch = Branch::Tournament;
    report.window = Some(window);
    report.scale = Some(guesses[idx].0.m);
    report.weights = Some(guesses[idx].0.w.clone());
    Ok(LearnOutcome {
        hypothesis: winner,
        report,
    })
}
