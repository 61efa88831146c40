use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::dist::KIrv;

/// Horner evaluation of `Σ c_j x^j`.
pub fn pgf_eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

fn derivative_eval(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (j, &c)| {
            acc * x + c * j as f64
        })
}

/// Coefficients of `p(x + s)`.
fn taylor_shift(p: &[f64], s: f64) -> Vec<f64> {
    let mut c = p.to_vec();
    let d = c.len() - 1;
    for i in 0..d {
        for j in (i..d).rev() {
            c[j] += s * c[j + 1];
        }
    }
    c
}

/// Eigenvalues of the companion matrix. Francis iterations can stall on
/// rotation-symmetric root sets (roots of unity), so a stalled run is retried
/// on a shifted copy of the polynomial.
fn companion_roots(p: &[f64]) -> Vec<Complex64> {
    let deg = p.len() - 1;
    for shift in [0.0, 0.31, -0.47, 0.73] {
        let q = taylor_shift(p, shift);
        let lead = q[deg];
        // subdiagonal ones, last column −a_i
        let mut c = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            c[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            c[(i, deg - 1)] = -q[i] / lead;
        }
        if let Some(schur) = Schur::try_new(c, f64::EPSILON, 500 * deg) {
            return schur
                .complex_eigenvalues()
                .iter()
                .map(|z| z + shift)
                .collect();
        }
    }
    panic!("companion eigenvalues failed to converge for {p:?}");
}

/// All roots of `E[x^X]`, with multiplicity. Zero roots come from leading zero
/// probabilities; the rest are companion-matrix eigenvalues polished by two
/// Newton steps (each kept only if it lowers the residual).
pub fn irv_pgf_roots(irv: &KIrv) -> Vec<Complex64> {
    let p = irv.probs();
    let Some(top) = p.iter().rposition(|&x| x > 0.0) else {
        return Vec::new();
    };
    let low = p.iter().position(|&x| x > 0.0).unwrap_or(0);
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let deg = top - low;
    if deg == 0 {
        return roots;
    }
    let reduced = &p[low..=top];
    for mut z in companion_roots(reduced) {
        for _ in 0..2 {
            let f = pgf_eval(reduced, z);
            let d = derivative_eval(reduced, z);
            if d.norm() == 0.0 {
                break;
            }
            let cand = z - f / d;
            if pgf_eval(reduced, cand).norm() < f.norm() {
                z = cand;
            }
        }
        roots.push(z);
    }
    roots
}

/// Divides `p` by `(x − ρ)`, dropping the remainder.
pub fn deflate(p: &[Complex64], rho: Complex64) -> Vec<Complex64> {
    let d = p.len() - 1;
    let mut q = vec![Complex64::new(0.0, 0.0); d];
    let mut acc = Complex64::new(0.0, 0.0);
    for i in (1..=d).rev() {
        acc = acc * rho + p[i];
        q[i - 1] = acc;
    }
    q
}
