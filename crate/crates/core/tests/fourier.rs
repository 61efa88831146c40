use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use siirv::dist::{convolve, exact_pmf, mean_variance, random_model, KIrv, KSiirv, Pmf};
use siirv::fourier::{dft_point, heavy_set_with_radius, heavy_support_set, inverse_dft, SparseDft};
use siirv::rng::stream;

/// `Σ_j P(j) exp(−2πi ξ j / M)` with angles reduced in exact integer arithmetic.
fn naive_dft(p: &Pmf, m: u64, xi: u64) -> Complex64 {
    (p.lo()..=p.hi())
        .map(|j| {
            let r = ((xi as i128 * j as i128).rem_euclid(m as i128)) as f64 / m as f64;
            p.get(j) * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * r)
        })
        .sum()
}

fn random_models_with_spread(count: usize, seed: u64) -> Vec<KSiirv> {
    let mut rng = stream(seed, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = rng.random_range(2..=5);
        let n = rng.random_range(5..=200);
        let m = random_model(k, n, &mut rng);
        if mean_variance(&m).1 >= 4.0 {
            out.push(m);
        }
    }
    out
}

#[test]
fn large_coefficients_stay_in_the_heavy_set() {
    let mut worst_count_ratio: f64 = 0.0;
    for (i, m) in random_models_with_spread(200, 31).iter().enumerate() {
        let p = exact_pmf(m);
        let s = mean_variance(m).1.sqrt();
        let k = m.k();
        let support_len = p.len() as u64;
        for modulus in [s.floor() as u64 + 1, support_len, 3 * support_len + 7] {
            for delta in [0.1, 0.01] {
                let set = heavy_support_set(modulus, k, s, delta).unwrap();
                // the tight radius, half of what the learner uses
                let tight =
                    heavy_set_with_radius(modulus, k, (1.0 / delta).ln().sqrt() / (2.0 * s))
                        .unwrap();
                let mut count = 0usize;
                for xi in 0..modulus {
                    if dft_point(&p, modulus, xi).norm() > delta {
                        count += 1;
                        assert!(set.contains(xi), "model {i}: xi={xi} M={modulus}");
                        assert!(
                            tight.contains(xi),
                            "model {i}: xi={xi} M={modulus} (tight radius)"
                        );
                    }
                }
                let bound = 4.0 * modulus as f64 * k as f64 * (1.0 / delta).ln().sqrt() / s;
                assert!(count as f64 <= bound, "model {i}: {count} > {bound}");
                worst_count_ratio = worst_count_ratio.max(count as f64 / bound);
            }
        }
    }
    println!("largest effective-support size relative to its bound: {worst_count_ratio:.3}");
}

fn irv(k: usize) -> impl Strategy<Value = KIrv> {
    prop::collection::vec(0.01f64..1.0, k).prop_map(|raw| {
        let s: f64 = raw.iter().sum();
        KIrv::new(raw.iter().map(|x| x / s).collect()).unwrap()
    })
}

fn model() -> impl Strategy<Value = KSiirv> {
    (2..=5usize, 1..=30usize).prop_flat_map(|(k, n)| {
        prop::collection::vec(irv(k), n).prop_map(|c| KSiirv::new(c).unwrap())
    })
}

proptest! {
    #[test]
    fn dft_matches_direct_sum(m in model(), modulus in 2u64..300, xi_frac in 0.0f64..1.0) {
        let p = exact_pmf(&m);
        let xi = (xi_frac * modulus as f64) as u64 % modulus;
        prop_assert!((dft_point(&p, modulus, xi) - naive_dft(&p, modulus, xi)).norm() < 1e-10);
    }

    #[test]
    fn dft_of_convolution_is_product(a in model(), b in model(), modulus in 2u64..300, xi_frac in 0.0f64..1.0) {
        let (pa, pb) = (exact_pmf(&a), exact_pmf(&b));
        let xi = (xi_frac * modulus as f64) as u64 % modulus;
        let lhs = dft_point(&convolve(&pa, &pb), modulus, xi);
        let rhs = dft_point(&pa, modulus, xi) * dft_point(&pb, modulus, xi);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn dft_is_conjugate_symmetric(m in model(), modulus in 2u64..300, xi_frac in 0.0f64..1.0) {
        let p = exact_pmf(&m);
        let xi = (xi_frac * modulus as f64) as u64 % modulus;
        let mirror = (modulus - xi) % modulus;
        prop_assert!((dft_point(&p, modulus, mirror) - dft_point(&p, modulus, xi).conj()).norm() < 1e-12);
    }

    #[test]
    fn full_dft_inverts_onto_a_long_window(m in model(), extra in 0u64..20, shift in -5i64..5) {
        let p = exact_pmf(&m);
        let modulus = p.len() as u64 + extra + shift.unsigned_abs();
        let lo = p.lo() + shift.min(0);
        let entries = (0..modulus).map(|xi| (xi, dft_point(&p, modulus, xi))).collect();
        let back = inverse_dft(&SparseDft::new(modulus, lo, entries).unwrap()).unwrap();
        for x in lo..lo + modulus as i64 {
            prop_assert!((back.get(x) - p.get(x)).abs() < 1e-10, "x={}", x);
        }
    }
}
