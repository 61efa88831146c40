use std::f64::consts::PI;

use num_complex::Complex64;

/// Roots near `w` and the Taylor coefficients of `ln q` at `w`, where
/// `q(x) = lead · ∏_far (x − r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorData {
    pub near: Vec<Complex64>,
    /// `coeffs[0] = ln q(w)` (principal branch), `coeffs[j] = −(1/j) Σ_far (r − w)^{−j}`.
    pub coeffs: Vec<Complex64>,
}

impl TaylorData {
    pub fn q_at_w(&self) -> Complex64 {
        self.coeffs[0].exp()
    }

    /// `∏_near (x − ρ) · exp(Σ_j c_j (x − w)^j)`.
    pub fn reconstruct(&self, w: Complex64, x: Complex64) -> Complex64 {
        let t = x - w;
        let series = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
        self.near.iter().fold(series.exp(), |acc, r| acc * (x - r))
    }
}

/// Splits `roots` at distance `radius` from `w` and expands `ln q` to order `ell`.
pub fn taylor_log_q(
    roots: &[Complex64],
    w: Complex64,
    radius: f64,
    ell: usize,
    lead: Complex64,
) -> TaylorData {
    let (near, far): (Vec<Complex64>, Vec<Complex64>) =
        roots.iter().partition(|r| (*r - w).norm() <= radius);
    // sum of logs rather than the log of a long product, wrapped back to the principal branch
    let log_q = far.iter().fold(lead.ln(), |acc, r| acc + (w - r).ln());
    let im = (log_q.im + PI).rem_euclid(2.0 * PI) - PI;
    let mut coeffs = Vec::with_capacity(ell + 1);
    coeffs.push(Complex64::new(log_q.re, if im == -PI { PI } else { im }));
    let inv: Vec<Complex64> = far.iter().map(|r| (r - w).inv()).collect();
    let mut pow = vec![Complex64::new(1.0, 0.0); inv.len()];
    for j in 1..=ell {
        let mut s = Complex64::new(0.0, 0.0);
        for (p, i) in pow.iter_mut().zip(&inv) {
            *p *= i;
            s += *p;
        }
        coeffs.push(-s / j as f64);
    }
    TaylorData { near, coeffs }
}
