use num_complex::Complex64;
use rand::Rng;

use siirv::cover::{irv_pgf_roots, pgf_eval};
use siirv::dist::{random_model, KIrv, KSiirv};

/// Roots of every component PGF, with the product of their leading coefficients.
pub fn all_roots(model: &KSiirv) -> (Vec<Complex64>, f64) {
    let mut roots = Vec::new();
    let mut lead = 1.0;
    for irv in model.components() {
        roots.extend(irv_pgf_roots(irv));
        lead *= irv
            .probs()
            .iter()
            .rev()
            .copied()
            .find(|&p| p > 0.0)
            .unwrap();
    }
    (roots, lead)
}

pub fn pgf(model: &KSiirv, x: Complex64) -> Complex64 {
    model
        .components()
        .iter()
        .map(|c| pgf_eval(c.probs(), x))
        .product()
}

/// Random model mixing simplex draws with IRVs whose roots sit on the circle.
pub fn mixed_model<R: Rng>(k: usize, n: usize, rng: &mut R) -> KSiirv {
    let mut comps = random_model(k, n, rng).components().to_vec();
    for c in comps.iter_mut() {
        match rng.random_range(0..4) {
            0 => *c = KIrv::new(vec![1.0 / k as f64; k]).unwrap(),
            1 => {
                let mut p = vec![0.0; k];
                p[0] = 0.5;
                p[k - 1] = 0.5;
                *c = KIrv::new(p).unwrap();
            }
            _ => {}
        }
    }
    KSiirv::new(comps).unwrap()
}
