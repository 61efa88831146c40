use serde::{Deserialize, Serialize};

use super::roots::irv_pgf_roots;
use super::taylor::taylor_log_q;
use super::{ArcPartition, CoverConfig};
use crate::dist::KIrv;
use num_complex::Complex64;

/// A complex number as integer multiples of δ: `(re/δ, im/δ)`.
pub type GridPoint = (i64, i64);

fn round_to_grid(z: Complex64, delta: f64) -> GridPoint {
    ((z.re / delta).round() as i64, (z.im / delta).round() as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcDescriptor {
    /// Rounded near roots, sorted lexicographically.
    pub roots: Vec<GridPoint>,
    /// Rounded running sum of `ln q(w)`; `None` once the real part has dropped below the threshold.
    pub c0: Option<GridPoint>,
    /// Rounded running sums of `c_1..c_ℓ`.
    pub coeffs: Vec<GridPoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcState {
    Small,
    Tracked(ArcDescriptor),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverDescriptor {
    pub per_arc: Vec<ArcState>,
}

impl CoverDescriptor {
    /// Descriptor of the empty sum (generating function 1).
    pub fn empty(arcs: usize, ell: usize) -> Self {
        let blank = ArcDescriptor {
            roots: Vec::new(),
            c0: Some((0, 0)),
            coeffs: vec![(0, 0); ell],
        };
        CoverDescriptor {
            per_arc: vec![ArcState::Tracked(blank); arcs],
        }
    }

    pub fn small_arcs(&self) -> usize {
        self.per_arc
            .iter()
            .filter(|a| matches!(a, ArcState::Small))
            .count()
    }
}

fn add(a: GridPoint, b: GridPoint) -> GridPoint {
    (a.0 + b.0, a.1 + b.1)
}

fn below_threshold(c0: GridPoint, cfg: &CoverConfig) -> bool {
    (c0.0 as f64) * cfg.delta < cfg.sentinel_threshold()
}

fn merge_arc(a: &ArcState, b: &ArcState, cfg: &CoverConfig) -> ArcState {
    let (ArcState::Tracked(a), ArcState::Tracked(b)) = (a, b) else {
        return ArcState::Small;
    };
    if a.roots.len() + b.roots.len() >= cfg.m {
        return ArcState::Small;
    }
    let mut roots = Vec::with_capacity(a.roots.len() + b.roots.len());
    roots.extend_from_slice(&a.roots);
    roots.extend_from_slice(&b.roots);
    roots.sort_unstable();
    let c0 = match (a.c0, b.c0) {
        (Some(x), Some(y)) => Some(add(x, y)).filter(|&s| !below_threshold(s, cfg)),
        _ => None,
    };
    let coeffs = a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .map(|(&x, &y)| add(x, y))
        .collect();
    ArcState::Tracked(ArcDescriptor { roots, c0, coeffs })
}

/// Descriptor of a sum from the descriptors of its two parts: root lists
/// concatenate (Small at `m` roots), coefficients add, and a `c_0` whose real
/// part falls below `−nk − m − m ln k` sticks at `-∞`.
pub fn combine(a: &CoverDescriptor, b: &CoverDescriptor, cfg: &CoverConfig) -> CoverDescriptor {
    CoverDescriptor {
        per_arc: a
            .per_arc
            .iter()
            .zip(&b.per_arc)
            .map(|(x, y)| merge_arc(x, y, cfg))
            .collect(),
    }
}

/// Descriptor of a single k-IRV.
pub fn irv_descriptor(irv: &KIrv, partition: &ArcPartition, cfg: &CoverConfig) -> CoverDescriptor {
    let roots = irv_pgf_roots(irv);
    let lead = irv
        .probs()
        .iter()
        .rev()
        .copied()
        .find(|&p| p > 0.0)
        .unwrap_or(1.0);
    let radius = 1.0 / (3.0 * cfg.k as f64);
    let per_arc = (0..partition.len())
        .map(|arc| {
            let w = partition.midpoint(arc);
            let t = taylor_log_q(&roots, w, radius, cfg.ell, Complex64::new(lead, 0.0));
            if t.near.len() >= cfg.m {
                return ArcState::Small;
            }
            let mut near: Vec<GridPoint> = t
                .near
                .iter()
                .map(|&r| round_to_grid(r, cfg.delta))
                .collect();
            near.sort_unstable();
            let c0 = round_to_grid(t.coeffs[0], cfg.delta);
            ArcState::Tracked(ArcDescriptor {
                roots: near,
                c0: Some(c0).filter(|&c| !below_threshold(c, cfg)),
                coeffs: t.coeffs[1..]
                    .iter()
                    .map(|&c| round_to_grid(c, cfg.delta))
                    .collect(),
            })
        })
        .collect();
    CoverDescriptor { per_arc }
}
