use serde::{Deserialize, Serialize};

/// Standard normal upper tail `P(G > t)`.
fn upper_tail(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Standard normal CDF, accurate in both tails.
pub fn std_normal_cdf(t: f64) -> f64 {
    upper_tail(-t)
}

/// `P(a < G ≤ b)` for a standard normal, computed on the side with the smaller tails.
pub fn std_normal_interval(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= 0.0 {
        upper_tail(a) - upper_tail(b)
    } else if b <= 0.0 {
        upper_tail(-b) - upper_tail(-a)
    } else {
        1.0 - upper_tail(b) - upper_tail(-a)
    }
}

/// A Gaussian draw rounded to the nearest integer (halves round up).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiscretizedNormal {
    pub mu: f64,
    pub sigma_sq: f64,
}

impl DiscretizedNormal {
    pub fn new(mu: f64, sigma_sq: f64) -> Self {
        assert!(sigma_sq >= 0.0 && mu.is_finite(), "bad normal parameters");
        DiscretizedNormal { mu, sigma_sq }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_sq.sqrt()
    }

    pub fn pmf(&self, z: i64) -> f64 {
        let s = self.sigma();
        if s == 0.0 {
            return if z == (self.mu + 0.5).floor() as i64 {
                1.0
            } else {
                0.0
            };
        }
        let zf = z as f64;
        std_normal_interval((zf - 0.5 - self.mu) / s, (zf + 0.5 - self.mu) / s)
    }

    pub fn cdf(&self, z: i64) -> f64 {
        let s = self.sigma();
        if s == 0.0 {
            return if z >= (self.mu + 0.5).floor() as i64 {
                1.0
            } else {
                0.0
            };
        }
        std_normal_cdf((z as f64 + 0.5 - self.mu) / s)
    }

    /// Integer range outside of which the mass is below 1e-30.
    pub fn effective_range(&self) -> (i64, i64) {
        let w = 12.0 * self.sigma() + 1.0;
        ((self.mu - w).floor() as i64, (self.mu + w).ceil() as i64)
    }
}

/// Upper bound on the TV distance between two normals with `σ1 ≤ σ2`.
pub fn normal_tv_bound(mu1: f64, s1_sq: f64, mu2: f64, s2_sq: f64) -> f64 {
    let s1 = s1_sq.sqrt();
    0.5 * ((mu1 - mu2).abs() / s1 + (s2_sq - s1_sq).abs() / s1_sq)
}
