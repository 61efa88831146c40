//! Hypotheses returned by the learners, with pmf and CDF evaluation.

mod heavy;
mod normal;
mod sampler;
mod tournament;

pub use heavy::{heavy_variance_threshold, learn_heavy};
pub use normal::{normal_tv_bound, std_normal_cdf, std_normal_interval, DiscretizedNormal};
pub use sampler::{bit_budget, sample_from_hypothesis, PreparedSampler};
pub use tournament::{scheffe_winner, tournament, tournament_index};

use crate::dist::{stable_sum, Pmf};
use crate::error::{Error, Result};
use crate::fourier::{e_frac, reduce_product, SparseDft};

/// `cZ + Y` with `Z` a discretized normal and `Y` supported on `{0..c-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPlusIrv {
    c: usize,
    gaussian: DiscretizedNormal,
    remainder: Pmf,
}

impl GaussianPlusIrv {
    pub fn new(c: usize, gaussian: DiscretizedNormal, remainder: Pmf) -> Result<Self> {
        if c == 0 {
            return Err(Error::InvalidArgument("c must be at least 1".into()));
        }
        let c_i = c as i64;
        let rem = remainder.restrict(0, c_i - 1);
        let stray = (remainder.lo()..=remainder.hi())
            .any(|i| !(0..c_i).contains(&i) && remainder.get(i) != 0.0);
        if stray || !rem.is_normalized() {
            return Err(Error::InvalidArgument(
                "remainder must be a distribution on {0..c-1}".into(),
            ));
        }
        Ok(GaussianPlusIrv {
            c,
            gaussian,
            remainder: rem,
        })
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn gaussian(&self) -> &DiscretizedNormal {
        &self.gaussian
    }

    pub fn remainder(&self) -> &Pmf {
        &self.remainder
    }

    fn evaluate(&self, x: i64) -> f64 {
        let c = self.c as i64;
        let y = x.rem_euclid(c);
        self.remainder.get(y) * self.gaussian.pmf((x - y) / c)
    }

    fn cdf(&self, x: i64) -> f64 {
        let c = self.c as i64;
        stable_sum((0..c).map(|y| self.remainder.get(y) * self.gaussian.cdf((x - y).div_euclid(c))))
    }

    fn window(&self) -> (i64, i64) {
        let (lo, hi) = self.gaussian.effective_range();
        let c = self.c as i64;
        (lo * c, hi * c + c - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Hypothesis {
    Empirical(Pmf),
    SparseFourier(SparseDft),
    GaussianPlusIrv(GaussianPlusIrv),
    Mollified(Pmf),
}

impl Hypothesis {
    pub fn kind(&self) -> &'static str {
        match self {
            Hypothesis::Empirical(_) => "empirical",
            Hypothesis::SparseFourier(_) => "sparse_fourier",
            Hypothesis::GaussianPlusIrv(_) => "gaussian_plus_irv",
            Hypothesis::Mollified(_) => "mollified",
        }
    }

    /// Pseudo-pmf value at `i`; zero outside the window.
    pub fn evaluate(&self, i: i64) -> f64 {
        match self {
            Hypothesis::Empirical(p) | Hypothesis::Mollified(p) => p.get(i),
            Hypothesis::SparseFourier(d) => d.value_at(i),
            Hypothesis::GaussianPlusIrv(g) => g.evaluate(i),
        }
    }

    /// `Σ_{j ≤ x} H(j)`. Sparse hypotheses use the geometric-series closed form.
    pub fn cdf(&self, x: i64) -> f64 {
        match self {
            Hypothesis::Empirical(p) | Hypothesis::Mollified(p) => p.cdf(x),
            Hypothesis::SparseFourier(d) => sparse_cdf(d, x),
            Hypothesis::GaussianPlusIrv(g) => g.cdf(x),
        }
    }

    /// Inclusive integer range carrying all (or, for the Gaussian variant, all but 1e-30) of the mass.
    pub fn window(&self) -> (i64, i64) {
        match self {
            Hypothesis::Empirical(p) | Hypothesis::Mollified(p) => (p.lo(), p.hi()),
            Hypothesis::SparseFourier(d) => (d.window_lo(), d.window_hi()),
            Hypothesis::GaussianPlusIrv(g) => g.window(),
        }
    }

    /// Dense values over the window.
    pub fn to_pmf(&self) -> Pmf {
        match self {
            Hypothesis::Empirical(p) | Hypothesis::Mollified(p) => p.clone(),
            _ => {
                let (lo, hi) = self.window();
                Pmf::new(lo, (lo..=hi).map(|i| self.evaluate(i)).collect())
            }
        }
    }

    /// All CDF values on `[lo - 1, hi]` of the window, in order.
    pub fn cdf_table(&self) -> Vec<f64> {
        let (lo, hi) = self.window();
        match self {
            Hypothesis::SparseFourier(d) => (lo - 1..=hi).map(|x| sparse_cdf(d, x)).collect(),
            _ => {
                let mut out = Vec::with_capacity((hi - lo + 2) as usize);
                out.push(0.0);
                let mut acc = 0.0;
                for v in self.to_pmf().values() {
                    acc += v;
                    out.push(acc);
                }
                out
            }
        }
    }
}

fn sparse_cdf(d: &SparseDft, x: i64) -> f64 {
    let (a, b) = (d.window_lo(), d.window_hi());
    if x < a {
        return 0.0;
    }
    if x >= b {
        return 1.0;
    }
    let m = d.modulus();
    let mut s = (x + 1 - a) as f64;
    for (&xi, h) in d.entries().range(1..) {
        let num = e_frac(-reduce_product(xi, a, m), m) - e_frac(-reduce_product(xi, x + 1, m), m);
        let den = num_complex::Complex64::new(1.0, 0.0) - e_frac(-(xi as i64), m);
        s += (h * num / den).re;
    }
    s / m as f64
}
