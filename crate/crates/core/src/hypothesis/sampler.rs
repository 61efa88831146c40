//! Inverse-CDF sampling by binary search with a fixed bit budget.
//!
//! The CDF of a pseudo-distribution need not be monotone. The search keeps
//! `c(a') ≤ y ≤ c(b')` with `c(a') < c(b')`, so it always ends on a point with
//! positive mass.

use super::Hypothesis;
use crate::rng::BitSource;

/// `⌈log₂(10·M/ε)⌉` for a window of `window_len` points.
pub fn bit_budget(window_len: u64, epsilon: f64) -> u32 {
    (10.0 * window_len as f64 / epsilon).log2().ceil().max(1.0) as u32
}

fn read_uniform(bits: &mut dyn BitSource, r: u32) -> f64 {
    let mut u = 0u64;
    for _ in 0..r {
        u = (u << 1) | bits.next_bit() as u64;
    }
    u as f64 / (r as f64).exp2()
}

/// Search over `[lo - 1, hi]` with `c(lo - 1) = 0` and `c(hi) = 1` pinned.
fn search(lo: i64, hi: i64, y: f64, mut c: impl FnMut(i64) -> f64) -> i64 {
    let (mut a, mut b) = (lo - 1, hi);
    let mut ca = 0.0;
    while b - a > 1 {
        let mid = a + (b - a) / 2;
        let cm = c(mid);
        if ca < cm && y <= cm {
            b = mid;
        } else {
            a = mid;
            ca = cm;
        }
    }
    b
}

/// One draw, evaluating the hypothesis CDF on demand. Consumes exactly
/// `bit_budget(window length, ε)` bits.
pub fn sample_from_hypothesis(h: &Hypothesis, epsilon: f64, bits: &mut dyn BitSource) -> i64 {
    let (lo, hi) = h.window();
    let r = bit_budget((hi - lo + 1) as u64, epsilon);
    let y = read_uniform(bits, r);
    search(lo, hi, y, |x| if x >= hi { 1.0 } else { h.cdf(x) })
}

/// The same sampler with every CDF value computed once up front.
#[derive(Debug, Clone)]
pub struct PreparedSampler {
    lo: i64,
    hi: i64,
    bits: u32,
    /// CDF on `[lo - 1, hi]`.
    table: Vec<f64>,
}

impl PreparedSampler {
    pub fn new(h: &Hypothesis, epsilon: f64) -> Self {
        let (lo, hi) = h.window();
        PreparedSampler {
            lo,
            hi,
            bits: bit_budget((hi - lo + 1) as u64, epsilon),
            table: h.cdf_table(),
        }
    }

    pub fn bits_per_draw(&self) -> u32 {
        self.bits
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn sample(&self, bits: &mut dyn BitSource) -> i64 {
        let y = read_uniform(bits, self.bits);
        self.sample_at(y)
    }

    /// The deterministic map from a uniform value to an output point.
    pub fn sample_at(&self, y: f64) -> i64 {
        let (lo, hi) = (self.lo, self.hi);
        search(lo, hi, y, |x| {
            if x >= hi {
                1.0
            } else {
                self.table[(x - lo + 1) as usize]
            }
        })
    }

    /// Exact output law: runs the search for every one of the `2^r` uniform values.
    pub fn output_distribution(&self) -> crate::dist::Pmf {
        let n = 1u64 << self.bits;
        let mut counts = vec![0u64; (self.hi - self.lo + 1) as usize];
        for u in 0..n {
            counts[(self.sample_at(u as f64 / n as f64) - self.lo) as usize] += 1;
        }
        crate::dist::Pmf::new(
            self.lo,
            counts.into_iter().map(|c| c as f64 / n as f64).collect(),
        )
    }
}
