use rayon::prelude::*;
use serde::Serialize;

use super::{grid_irvs, CoverConfig};
use crate::dist::{exact_pmf, tv_distance, KIrv, KSiirv, Pmf};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    /// `max_P min_Q d_TV(P, Q)` over every enumerated model `P`.
    pub max_min_tv: f64,
    /// A model attaining the maximum.
    pub witness: KSiirv,
    pub models_checked: usize,
    pub cover_size: usize,
}

fn multisets(g: usize, n: usize) -> f64 {
    // C(g + n − 1, n)
    (0..n).fold(1.0, |acc, i| acc * (g + i) as f64 / (i + 1) as f64)
}

/// Every N-discrete order-`n` k-SIIRV, one per multiset of components (the
/// sum does not depend on their order).
pub fn enumerate_models(k: usize, grid_n: usize, n: usize) -> Vec<KSiirv> {
    let grid = grid_irvs(k, grid_n);
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        out.push(
            KSiirv::new(idx.iter().map(|&i| grid[i].clone()).collect::<Vec<KIrv>>())
                .expect("n >= 1"),
        );
        // next non-decreasing index vector
        let Some(pos) = (0..n).rev().find(|&p| idx[p] + 1 < grid.len()) else {
            return out;
        };
        let v = idx[pos] + 1;
        for slot in &mut idx[pos..] {
            *slot = v;
        }
    }
}

/// Brute-force certification: min TV from each enumerated model to the cover.
pub fn verify_cover(cover: &[KSiirv], cfg: &CoverConfig) -> Result<VerifyReport> {
    cfg.validate()?;
    if cover.is_empty() {
        return Err(Error::InvalidArgument("empty cover".into()));
    }
    let g = grid_irvs(cfg.k, cfg.grid_n).len();
    let work = multisets(g, cfg.n) * cover.len() as f64;
    if work > cfg.budget {
        return Err(Error::BudgetExceeded {
            projected: work,
            budget: cfg.budget,
        });
    }
    let cover_pmfs: Vec<Pmf> = cover.par_iter().map(exact_pmf).collect();
    let models = enumerate_models(cfg.k, cfg.grid_n, cfg.n);
    let dists: Vec<f64> = models
        .par_iter()
        .map(|m| {
            let p = exact_pmf(m);
            let mut best = f64::INFINITY;
            for q in &cover_pmfs {
                best = best.min(tv_distance(&p, q));
                if best == 0.0 {
                    break;
                }
            }
            best
        })
        .collect();
    // first index attaining the maximum, for a deterministic witness
    let (worst, &max_min_tv) =
        dists
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (i, d)| {
                if *d > *acc.1 {
                    (i, d)
                } else {
                    acc
                }
            });
    Ok(VerifyReport {
        max_min_tv,
        witness: models[worst].clone(),
        models_checked: models.len(),
        cover_size: cover.len(),
    })
}
