//! Smooth frequency cut-off: `F̂ = I ∗ Ĝ` with `I` the indicator of a union of
//! arcs and `Ĝ` a narrow wrapped Gaussian; in space `F = G · S`.
//!
//! `Ĝ` has standard deviation `1/(2πσ̃)`, which makes `G(x) = exp(-x²/(2σ̃²))`
//! exactly, and `S` is the inverse transform of `I` (a sum of Sinc terms).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::hypothesis::std_normal_interval;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub sigma_tilde: f64,
    pub epsilon: f64,
    pub c_const: f64,
    /// Arc centers in `[0, 1)`, sorted.
    pub centers: Vec<f64>,
    /// Half-width of the arc around each center.
    pub interval_radius: f64,
}

impl MollifierSpec {
    /// One arc around 0 of radius `C √ln(1/ε) / σ̃`.
    pub fn single(sigma_tilde: f64, epsilon: f64, c_const: f64) -> Self {
        let radius = c_const * (1.0 / epsilon).ln().sqrt() / sigma_tilde;
        MollifierSpec {
            sigma_tilde,
            epsilon,
            c_const,
            centers: vec![0.0],
            interval_radius: radius,
        }
    }

    pub fn multi(
        sigma_tilde: f64,
        epsilon: f64,
        c_const: f64,
        centers: &[f64],
        interval_radius: f64,
    ) -> Self {
        let mut centers: Vec<f64> = centers.iter().map(|c| c.rem_euclid(1.0)).collect();
        centers.sort_by(f64::total_cmp);
        centers.dedup();
        MollifierSpec {
            sigma_tilde,
            epsilon,
            c_const,
            centers,
            interval_radius,
        }
    }

    /// Standard deviation of `Ĝ`.
    pub fn gaussian_width(&self) -> f64 {
        1.0 / (2.0 * PI * self.sigma_tilde)
    }

    /// The support of `I` as disjoint subintervals of `[0, 1]`. Each center
    /// is mirrored to `-ξ` so that `F` is real.
    pub fn intervals(&self) -> Vec<(f64, f64)> {
        let r = self.interval_radius;
        if r >= 0.5 {
            return vec![(0.0, 1.0)];
        }
        let mut raw = Vec::new();
        for &c in &self.centers {
            for c in [c, (1.0 - c).rem_euclid(1.0)] {
                let (a, b) = (c - r, c + r);
                // split at the wrap point
                if a < 0.0 {
                    raw.push((0.0, b));
                    raw.push((1.0 + a, 1.0));
                } else if b > 1.0 {
                    raw.push((a, 1.0));
                    raw.push((0.0, b - 1.0));
                } else {
                    raw.push((a, b));
                }
            }
        }
        raw.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut merged: Vec<(f64, f64)> = Vec::new();
        for (a, b) in raw {
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        merged
    }
}

/// `sin(2π t x)` for integer `x`, reducing `t·x` modulo 1 first.
fn sin_2pi(t: f64, x: i64) -> f64 {
    let prod = t * x as f64;
    (2.0 * PI * (prod - prod.round())).sin()
}

/// `F(x) = exp(-x²/(2σ̃²)) · Σ_arcs (sin 2πbx − sin 2πax)/(2πx)`; for the single
/// arc `[-r, r]` this is `2r·Sinc(2πrx)`.
pub fn mollifier_values(spec: &MollifierSpec, xs: &[i64]) -> Vec<f64> {
    let arcs = spec.intervals();
    let s2 = spec.sigma_tilde * spec.sigma_tilde;
    xs.iter()
        .map(|&x| {
            let g = (-(x as f64).powi(2) / (2.0 * s2)).exp();
            let s = if x == 0 {
                arcs.iter().map(|(a, b)| b - a).sum::<f64>()
            } else {
                arcs.iter()
                    .map(|&(a, b)| sin_2pi(b, x) - sin_2pi(a, x))
                    .sum::<f64>()
                    / (2.0 * PI * x as f64)
            };
            g * s
        })
        .collect()
}

/// `F̂(ξ) = Σ_arcs P(ξ − b ≤ G′ ≤ ξ − a)` for the wrapped Gaussian `G′`,
/// clamped to `[0, 1]` against rounding.
pub fn fhat_values(spec: &MollifierSpec, xis: &[f64]) -> Vec<f64> {
    let arcs = spec.intervals();
    let tau = spec.gaussian_width();
    let wraps = (6.0 * tau).ceil() as i64 + 1;
    xis.iter()
        .map(|&xi| {
            let xi = xi.rem_euclid(1.0);
            let mut v = 0.0;
            for &(a, b) in &arcs {
                for n in -wraps..=wraps {
                    let shift = xi + n as f64;
                    v += std_normal_interval((shift - b) / tau, (shift - a) / tau);
                }
            }
            v.clamp(0.0, 1.0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_center_at_origin() {
        let spec = MollifierSpec::single(40.0, 0.1, 3.0);
        let f = mollifier_values(&spec, &[0, 5, -5]);
        assert!((f[0] - 2.0 * 3.0 * (10.0f64).ln().sqrt() / 40.0).abs() < 1e-15);
        assert_eq!(f[1], f[2]);
        let h = fhat_values(&spec, &[0.0, 0.25]);
        assert!(h[0] >= 1.0 - 0.01);
        assert!(h[1] <= 0.01);
    }

    #[test]
    fn intervals_wrap_and_merge() {
        let spec = MollifierSpec::multi(10.0, 0.1, 1.0, &[0.0, 0.05, 0.5], 0.04);
        assert_eq!(spec.intervals().len(), 3);
        let (a, b) = spec.intervals()[0];
        assert!(a == 0.0 && (b - 0.09).abs() < 1e-12);
    }

    #[test]
    fn fhat_matches_quadrature() {
        let spec = MollifierSpec::multi(12.0, 0.1, 1.0, &[0.0, 0.3], 0.05);
        let tau = spec.gaussian_width();
        let dens = |u: f64| (-(u * u) / (2.0 * tau * tau)).exp() / (tau * (2.0 * PI).sqrt());
        for &xi in &[0.0, 0.04, 0.051, 0.07, 0.3, 0.36, 0.5, 0.66, 0.97] {
            // ∫ I(ν) Ĝ(ξ − ν) dν by composite Simpson over each arc
            let mut q = 0.0;
            for (a, b) in spec.intervals() {
                let steps = 20_000;
                let h = (b - a) / steps as f64;
                for i in 0..=steps {
                    let nu = a + i as f64 * h;
                    let w = if i == 0 || i == steps {
                        1.0
                    } else if i % 2 == 1 {
                        4.0
                    } else {
                        2.0
                    };
                    let g: f64 = (-2..=2).map(|n| dens(xi - nu + n as f64)).sum();
                    q += w * g * h / 3.0;
                }
            }
            let f = fhat_values(&spec, &[xi])[0];
            assert!((f - q).abs() < 1e-8, "xi={xi} closed={f} quad={q}");
        }
    }
}
