//! Round-robin Scheffé tournament.

use rayon::prelude::*;

use super::Hypothesis;
use crate::calibration::Calibration;
use crate::error::{Error, Result};
use crate::source::SampleSource;

/// Draws used to compare `n_candidates` hypotheses at accuracy `ε`.
pub fn tournament_sample_count(n_candidates: usize, epsilon: f64, cal: &Calibration) -> usize {
    let ln = (n_candidates.max(2) as f64).ln();
    (cal.tournament_sample_mult * ln / (epsilon * epsilon)).ceil() as usize
}

/// Pairwise comparison on `A = {x : h_i(x) > h_j(x)}`: `Some(true)` if `h_i`
/// predicts the empirical mass of `A` strictly better, `Some(false)` if `h_j`
/// does, `None` on a tie.
pub fn scheffe_winner(hi: &[f64], hj: &[f64], empirical: &[f64]) -> Option<bool> {
    let (mut pi, mut pj, mut q) = (0.0, 0.0, 0.0);
    for ((&a, &b), &e) in hi.iter().zip(hj).zip(empirical) {
        if a > b {
            pi += a;
            pj += b;
            q += e;
        }
    }
    let (di, dj) = ((pi - q).abs(), (pj - q).abs());
    if di < dj {
        Some(true)
    } else if dj < di {
        Some(false)
    } else {
        None
    }
}

/// Index of the candidate with the most pairwise wins on `samples`; ties go to the lowest index.
pub fn tournament_index(candidates: &[Hypothesis], samples: &[i64]) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::InvalidArgument(
            "tournament needs at least one candidate".into(),
        ));
    }
    if candidates.len() == 1 {
        return Ok(0);
    }
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let lo = candidates.iter().map(|h| h.window().0).min().unwrap();
    let hi = candidates.iter().map(|h| h.window().1).max().unwrap();
    let len = (hi - lo + 1) as usize;
    let dense: Vec<Vec<f64>> = candidates
        .par_iter()
        .map(|h| {
            let p = h.to_pmf();
            (lo..=hi).map(|x| p.get(x)).collect()
        })
        .collect();
    // samples outside the union window land in no Scheffé set
    let mut empirical = vec![0.0; len];
    let w = 1.0 / samples.len() as f64;
    for &x in samples {
        if (lo..=hi).contains(&x) {
            empirical[(x - lo) as usize] += w;
        }
    }
    let n = candidates.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let outcomes: Vec<Option<bool>> = pairs
        .par_iter()
        .map(|&(i, j)| scheffe_winner(&dense[i], &dense[j], &empirical))
        .collect();
    let mut wins = vec![0usize; n];
    for (&(i, j), o) in pairs.iter().zip(outcomes) {
        match o {
            Some(true) => wins[i] += 1,
            Some(false) => wins[j] += 1,
            None => {}
        }
    }
    let best = *wins.iter().max().unwrap();
    Ok(wins.iter().position(|&w| w == best).unwrap())
}

/// Draws fresh samples from `source` and returns the tournament winner.
pub fn tournament(
    candidates: &[Hypothesis],
    source: &mut dyn SampleSource,
    epsilon: f64,
    cal: &Calibration,
) -> Result<(usize, Hypothesis)> {
    if candidates.is_empty() {
        return Err(Error::InvalidArgument(
            "tournament needs at least one candidate".into(),
        ));
    }
    if candidates.len() == 1 {
        return Ok((0, candidates[0].clone()));
    }
    let samples = source.draw(tournament_sample_count(candidates.len(), epsilon, cal))?;
    let idx = tournament_index(candidates, &samples)?;
    Ok((idx, candidates[idx].clone()))
}
