//! Cover for the high-variance regime: a geometric grid of variances, an
//! additive grid of means, and for each feasible target an explicit model
//! whose components are all constant modulo `c`.

use serde::Serialize;

use super::CoverConfig;
use crate::dist::{KIrv, KSiirv, Pmf};
use crate::error::Result;
use crate::hypothesis::{DiscretizedNormal, GaussianPlusIrv};

#[derive(Debug, Clone, Serialize)]
pub struct HighVarianceEntry {
    pub c: usize,
    pub target_mean: f64,
    pub target_var: f64,
    pub model: KSiirv,
    #[serde(skip)]
    pub surrogate: GaussianPlusIrv,
}

/// Whether some sum of `n` k-IRVs, each supported in a window of width `big_c`,
/// can have this mean and variance.
pub fn feasible(n: usize, k: usize, big_c: usize, mean: f64, var: f64) -> bool {
    let (nf, cf) = (n as f64, big_c as f64);
    if var >= nf * cf * cf / 4.0 {
        return false;
    }
    let m = mean.min(nf * (k - 1) as f64 - mean);
    if m <= 0.0 {
        return false;
    }
    m > nf * cf / 2.0 || var <= cf * m - m * m / nf
}

fn irv_on(k: usize, support: &[(usize, f64)]) -> KIrv {
    let mut p = vec![0.0; k];
    for &(v, w) in support {
        p[v] += w;
    }
    KIrv::new(p).expect("two-point distribution")
}

/// An explicit order-`n` model with mean within 1 and variance within `C²`
/// of the target, or `None` when the target is infeasible.
pub fn realize_target(n: usize, k: usize, big_c: usize, mean: f64, var: f64) -> Option<KSiirv> {
    if big_c == 0 || big_c > k - 1 || !feasible(n, k, big_c, mean, var) {
        return None;
    }
    let top = n as f64 * (k - 1) as f64;
    let reflect = mean > top / 2.0;
    let mu = if reflect { top - mean } else { mean };
    let cf = big_c as f64;
    let mut comps = Vec::with_capacity(n);
    if mu >= 2.0 * var / cf {
        // `a` fair coins on {x, x + C}; the integer offsets carry the rest of the mean
        let a = ((4.0 * var / (cf * cf)).floor() as usize).min(n);
        let mut left = (mu - a as f64 * cf / 2.0).round().max(0.0) as usize;
        for _ in 0..n - a {
            let v = left.min(k - 1);
            left -= v;
            comps.push(KIrv::constant(k, v));
        }
        for _ in 0..a {
            let x = left.min(k - 1 - big_c);
            left -= x;
            comps.push(irv_on(k, &[(x, 0.5), (x + big_c, 0.5)]));
        }
    } else {
        // `a` coins on {0, C} with P(C) = p, the rest constant 0
        let q = var / (cf * mu);
        let a = ((mu / ((1.0 - q) * cf)).round() as usize).clamp(1, n);
        let p = (mu / (a as f64 * cf)).min(1.0);
        comps.extend((0..a).map(|_| irv_on(k, &[(0, 1.0 - p), (big_c, p)])));
        comps.extend((a..n).map(|_| KIrv::constant(k, 0)));
    }
    if reflect {
        comps = comps
            .into_iter()
            .map(|c| KIrv::new(c.probs().iter().rev().copied().collect()).expect("reflection"))
            .collect();
    }
    KSiirv::new(comps).ok()
}

/// Residue modulo `c` shared by every outcome of a model whose components are constant mod `c`.
fn residue(model: &KSiirv, c: usize) -> usize {
    model
        .components()
        .iter()
        .map(|irv| irv.probs().iter().position(|&p| p > 0.0).unwrap_or(0))
        .sum::<usize>()
        % c
}

/// Grid `σ_i² = σ²_min (1+ε)^i` below `nC²/4`, means spaced `ε σ_i` over
/// `[0, n(k−1)]`, for every `1 ≤ c ≤ k−1` with `C` the largest multiple of
/// `c` not above `k−1`. Infeasible targets are skipped.
pub fn cover_high_variance(cfg: &CoverConfig) -> Result<Vec<HighVarianceEntry>> {
    cfg.validate()?;
    let (n, k, eps) = (cfg.n, cfg.k, cfg.epsilon);
    let var_min = cfg.sigma_sq_min.unwrap_or(((k as f64) / eps).powi(2));
    let top = n as f64 * (k - 1) as f64;
    let mut out = Vec::new();
    for c in 1..k {
        let big_c = (k - 1) / c * c;
        let var_cap = n as f64 * (big_c * big_c) as f64 / 4.0;
        let mut var = var_min;
        while var < var_cap {
            let step = eps * var.sqrt();
            let mut mean = step;
            while mean <= top {
                if let Some(model) = realize_target(n, k, big_c, mean, var) {
                    let r = residue(&model, c);
                    let mut rem = vec![0.0; c];
                    rem[r] = 1.0;
                    let gaussian =
                        DiscretizedNormal::new((mean - r as f64) / c as f64, var / (c * c) as f64);
                    let surrogate = GaussianPlusIrv::new(c, gaussian, Pmf::new(0, rem))?;
                    out.push(HighVarianceEntry {
                        c,
                        target_mean: mean,
                        target_var: var,
                        model,
                        surrogate,
                    });
                }
                mean += step;
            }
            var *= 1.0 + eps;
        }
    }
    Ok(out)
}
