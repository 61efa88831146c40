//! Proper ε-covers of k-SIIRVs.
//!
//! Low-variance models are covered by a dynamic program over Taylor
//! descriptors of the log generating function on short arcs of the unit
//! circle; high-variance models by a grid of (mean, variance) targets, each
//! realized by an explicit model.

mod descriptor;
mod dp;
mod high_variance;
mod reduce;
mod roots;
mod taylor;
mod verify;

pub use descriptor::{
    combine, irv_descriptor, ArcDescriptor, ArcState, CoverDescriptor, GridPoint,
};
pub use dp::{cover_siirv, descriptor_of, projected_states, CoverOutcome};
pub use high_variance::{cover_high_variance, realize_target, HighVarianceEntry};
pub use reduce::{cover_with_translations, sparsify};
pub use roots::{deflate, irv_pgf_roots, pgf_eval};
pub use taylor::{taylor_log_q, TaylorData};
pub use verify::{enumerate_models, verify_cover, VerifyReport};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dist::KIrv;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverConfig {
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    /// Probabilities are multiples of `1/N`.
    #[serde(rename = "N")]
    pub grid_n: usize,
    /// Rounding quantum for roots and coefficients.
    pub delta: f64,
    /// Near-root budget per arc; an arc with this many near roots is Small.
    pub m: usize,
    /// Taylor order.
    pub ell: usize,
    /// Refuse runs whose projected state count exceeds this.
    pub budget: f64,
    /// Smallest variance of the high-variance grid; `(k/ε)²` when absent.
    #[serde(default)]
    pub sigma_sq_min: Option<f64>,
}

impl CoverConfig {
    /// Parameters sized for exhaustive checking.
    pub fn desk(n: usize, k: usize, epsilon: f64, grid_n: usize) -> Self {
        CoverConfig {
            n,
            k,
            epsilon,
            grid_n,
            delta: 1e-3,
            m: 6,
            ell: 12,
            budget: 5e7,
            sigma_sq_min: None,
        }
    }

    /// The asymptotic choices `m > 3 ln(1/ε)`, `ℓ > ln(nk/ε³)`, `δ < ε³/(mk+ℓ)`.
    pub fn asymptotic(n: usize, k: usize, epsilon: f64, grid_n: usize) -> Self {
        let l = (1.0 / epsilon).ln();
        let m = (3.0 * l).floor() as usize + 1;
        let ell = ((n * k) as f64 / epsilon.powi(3)).ln().floor() as usize + 1;
        let delta = 0.5 * epsilon.powi(3) / (m * k + ell) as f64;
        CoverConfig {
            n,
            k,
            epsilon,
            grid_n,
            delta,
            m,
            ell,
            budget: 5e7,
            sigma_sq_min: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!(
                "k must be at least 2, got {}",
                self.k
            )));
        }
        if self.n == 0 || self.grid_n == 0 {
            return Err(Error::InvalidArgument("n and N must be positive".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must lie in (0,1), got {}",
                self.epsilon
            )));
        }
        if self.delta.is_nan() || self.delta <= 0.0 || self.m == 0 {
            return Err(Error::InvalidArgument(
                "delta and m must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Real-part threshold below which the running `c_0` becomes `-∞`.
    pub fn sentinel_threshold(&self) -> f64 {
        let (n, k, m) = (self.n as f64, self.k as f64, self.m as f64);
        -n * k - m - m * k.ln()
    }

    pub fn partition(&self) -> ArcPartition {
        ArcPartition::new(self.k)
    }
}

/// Equal arcs of length at most `1/(3k)` covering the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcPartition {
    /// `(midpoint angle, half-length)` in radians.
    pub arcs: Vec<(f64, f64)>,
}

impl ArcPartition {
    pub fn new(k: usize) -> Self {
        let count = (6.0 * PI * k as f64).ceil() as usize;
        let half = PI / count as f64;
        ArcPartition {
            arcs: (0..count)
                .map(|t| ((2 * t + 1) as f64 * half, half))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn midpoint(&self, arc: usize) -> Complex64 {
        Complex64::from_polar(1.0, self.arcs[arc].0)
    }

    /// Index of the arc containing the point at `angle`.
    pub fn arc_of(&self, angle: f64) -> usize {
        let t = angle.rem_euclid(2.0 * PI) / (2.0 * self.arcs[0].1);
        (t.floor() as usize).min(self.arcs.len() - 1)
    }
}

/// Every k-IRV whose probabilities are multiples of `1/N`, in lexicographic order of numerators.
pub fn grid_irvs(k: usize, grid_n: usize) -> Vec<KIrv> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(left - a, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut nums = Vec::new();
    rec(grid_n, k, &mut Vec::new(), &mut nums);
    nums.into_iter()
        .map(|a| {
            KIrv::new(a.iter().map(|&x| x as f64 / grid_n as f64).collect()).expect("grid point")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_covers_circle() {
        for k in 2..=6 {
            let p = ArcPartition::new(k);
            let total: f64 = p.arcs.iter().map(|a| 2.0 * a.1).sum();
            assert!((total - 2.0 * PI).abs() < 1e-12);
            // arc length on the unit circle is the angle
            assert!(p.arcs.iter().all(|a| 2.0 * a.1 <= 1.0 / (3.0 * k as f64)));
            for (i, a) in p.arcs.iter().enumerate() {
                assert_eq!(p.arc_of(a.0), i);
            }
        }
    }

    #[test]
    fn grid_size_is_stars_and_bars() {
        assert_eq!(grid_irvs(2, 10).len(), 11);
        assert_eq!(grid_irvs(3, 4).len(), 15);
        assert_eq!(grid_irvs(4, 3).len(), 20);
    }
}
