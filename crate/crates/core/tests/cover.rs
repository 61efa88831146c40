use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use siirv::cover::{
    combine, cover_high_variance, cover_siirv, deflate, descriptor_of, enumerate_models, grid_irvs,
    irv_descriptor, realize_target, taylor_log_q, verify_cover, CoverConfig, CoverDescriptor,
};
use siirv::dist::{exact_pmf, mean_variance, tv_distance, KSiirv};
use siirv::rng::stream;

mod common;
use common::{all_roots, mixed_model, pgf};

#[test]
fn close_roots_make_the_transform_small() {
    let mut rng = stream(31, 0);
    let mut checked = 0;
    let mut trials = 0;
    while checked < 1000 {
        trials += 1;
        assert!(trials < 100_000, "too few points with nearby roots");
        let k = rng.random_range(2..=5);
        let n = rng.random_range(1..=12);
        let model = mixed_model(k, n, &mut rng);
        let (roots, lead) = all_roots(&model);
        // probe at the radial projection of a random root, plus a random angle
        let r = roots[rng.random_range(0..roots.len())];
        let probes = [
            if r.norm() > 0.0 {
                r / r.norm()
            } else {
                Complex64::new(1.0, 0.0)
            },
            Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI)),
        ];
        for x in probes {
            let near: Vec<Complex64> = roots
                .iter()
                .copied()
                .filter(|rho| (rho - x).norm() <= 1.0 / (2.0 * k as f64))
                .collect();
            let m = near.len();
            if m == 0 {
                continue;
            }
            let p = pgf(&model, x);
            assert!(
                p.norm() <= 2f64.powi(-(m as i32)) * (1.0 + 1e-9),
                "|P(x)|={} m={m}",
                p.norm()
            );
            let far_product = roots
                .iter()
                .filter(|rho| (*rho - x).norm() > 1.0 / (2.0 * k as f64))
                .fold(Complex64::new(lead, 0.0), |acc, rho| acc * (x - rho));
            assert!(far_product.norm() <= (k as f64).powi(m as i32) * (1.0 + 1e-9));
            checked += 1;
        }
    }
}

#[test]
fn deflation_grows_coefficient_mass_by_at_most_the_degree() {
    let mut rng = stream(32, 0);
    for _ in 0..500 {
        let d = rng.random_range(1..=8);
        let raw: Vec<Complex64> = (0..=d)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let s: f64 = raw.iter().map(|c| c.norm()).sum();
        let p: Vec<Complex64> = raw.iter().map(|c| c / s).collect();
        // roots of a complex polynomial through the monic companion matrix
        let mut comp = nalgebra::DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        for i in 0..d {
            comp[(i, d - 1)] = -p[i] / p[d];
        }
        let Some(eig) = comp.eigenvalues() else {
            continue;
        };
        for rho in eig.iter() {
            let q = deflate(&p, *rho);
            let mass: f64 = q.iter().map(|c| c.norm()).sum();
            assert!(mass <= d as f64 * (1.0 + 1e-6), "mass {mass} degree {d}");
        }
    }
}

#[test]
fn taylor_reconstruction_within_error_bound() {
    let mut rng = stream(33, 0);
    let cfg = CoverConfig::desk(50, 5, 0.2, 10);
    let rounding = cfg.delta / 2f64.sqrt();
    let round = |z: Complex64| {
        Complex64::new(
            (z.re / cfg.delta).round() * cfg.delta,
            (z.im / cfg.delta).round() * cfg.delta,
        )
    };
    let mut worst_ratio = 0.0f64;
    for _ in 0..20 {
        let k = rng.random_range(2..=5);
        let n = rng.random_range(5..=50);
        let model = mixed_model(k, n, &mut rng);
        let (roots, lead) = all_roots(&model);
        let part = siirv::cover::ArcPartition::new(k);
        for arc in 0..part.len() {
            let (theta, half) = part.arcs[arc];
            let w = part.midpoint(arc);
            let t = taylor_log_q(
                &roots,
                w,
                1.0 / (3.0 * k as f64),
                cfg.ell,
                Complex64::new(lead, 0.0),
            );
            let m = t.near.len();
            let mut rounded = t.clone();
            rounded.near = t.near.iter().map(|&r| round(r)).collect();
            rounded.coeffs = t.coeffs.iter().map(|&c| round(c)).collect();
            let bound = std::f64::consts::E
                * (2.0 * rounding + (n * k) as f64 * 2f64.powi(-(cfg.ell as i32)))
                + 4.0 * (m * k) as f64 * rounding;
            for i in 0..100 {
                let x = Complex64::from_polar(
                    1.0,
                    theta - half + 2.0 * half * (i as f64 + 0.5) / 100.0,
                );
                let err = (pgf(&model, x) - rounded.reconstruct(w, x)).norm();
                worst_ratio = worst_ratio.max(err / bound);
                assert!(err <= bound, "arc {arc} err {err} bound {bound}");
            }
        }
    }
    eprintln!("worst error/bound ratio {worst_ratio:.3e}");
}

#[test]
fn coefficients_respect_growth_bound() {
    let mut rng = stream(34, 0);
    for _ in 0..30 {
        let k = rng.random_range(2..=5);
        let n = rng.random_range(1..=20);
        let model = mixed_model(k, n, &mut rng);
        let (roots, lead) = all_roots(&model);
        let part = siirv::cover::ArcPartition::new(k);
        for arc in 0..part.len() {
            let t = taylor_log_q(
                &roots,
                part.midpoint(arc),
                1.0 / (3.0 * k as f64),
                10,
                Complex64::new(lead, 0.0),
            );
            for (j, c) in t.coeffs.iter().enumerate().skip(1) {
                assert!(
                    c.norm() <= (n * k) as f64 * (3.0 * k as f64).powi(j as i32) * (1.0 + 1e-9)
                );
            }
            assert!(t.coeffs[0].re <= t.near.len() as f64 * (k as f64).ln() + 1e-9);
        }
    }
}

#[test]
fn tiny_cover_is_certified() {
    let cfg = CoverConfig::desk(2, 2, 0.2, 10);
    let out = cover_siirv(&cfg).unwrap();
    assert!(out.models.len() <= 11 * 11);
    let distinct: HashSet<&CoverDescriptor> = out.descriptors.iter().collect();
    assert_eq!(distinct.len(), out.models.len());
    let report = verify_cover(&out.models, &cfg).unwrap();
    assert!(report.max_min_tv <= cfg.epsilon, "{report:?}");
}

#[test]
fn single_layer_cover_is_within_epsilon_of_the_grid() {
    for (k, grid_n) in [(2, 10), (3, 6), (4, 4)] {
        let cfg = CoverConfig::desk(1, k, 0.2, grid_n);
        let out = cover_siirv(&cfg).unwrap();
        let pmfs: Vec<_> = out.models.iter().map(exact_pmf).collect();
        for irv in grid_irvs(k, grid_n) {
            let p = exact_pmf(&KSiirv::new(vec![irv]).unwrap());
            let best = pmfs
                .iter()
                .map(|q| tv_distance(&p, q))
                .fold(f64::INFINITY, f64::min);
            assert!(best <= cfg.epsilon);
        }
    }
}

fn soundness(cfg: &CoverConfig) -> f64 {
    let mut classes: HashMap<CoverDescriptor, Vec<KSiirv>> = HashMap::new();
    for m in enumerate_models(cfg.k, cfg.grid_n, cfg.n) {
        // every ordering of the components is a distinct sequence for the DP
        let comps = m.components().to_vec();
        let mut orders = vec![comps.clone()];
        if cfg.n == 2 {
            orders.push(vec![comps[1].clone(), comps[0].clone()]);
        }
        for o in orders {
            let model = KSiirv::new(o).unwrap();
            classes
                .entry(descriptor_of(&model, cfg))
                .or_default()
                .push(model);
        }
    }
    let mut worst = 0.0f64;
    for models in classes.values() {
        let pmfs: Vec<_> = models.iter().map(exact_pmf).collect();
        for a in &pmfs {
            for b in &pmfs {
                worst = worst.max(tv_distance(a, b));
            }
        }
    }
    worst
}

#[test]
fn equal_descriptors_are_close() {
    for cfg in [
        CoverConfig::desk(2, 2, 0.2, 10),
        CoverConfig::desk(2, 3, 0.2, 5),
        CoverConfig::desk(3, 2, 0.2, 6),
    ] {
        let worst = soundness(&cfg);
        assert!(worst <= cfg.epsilon, "{cfg:?}: {worst}");
    }
}

fn sequences(g: usize, n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for s in sequences(g, n - 1) {
        for i in 0..g {
            let mut t = s.clone();
            t.push(i);
            out.push(t);
        }
    }
    out
}

#[test]
fn dp_reaches_exactly_the_enumerated_descriptors() {
    for (n, k, grid_n) in [(1, 3, 4), (2, 2, 6), (3, 2, 4), (2, 3, 3)] {
        let cfg = CoverConfig::desk(n, k, 0.2, grid_n);
        let out = cover_siirv(&cfg).unwrap();
        let dp: HashSet<CoverDescriptor> = out.descriptors.into_iter().collect();
        let grid = grid_irvs(k, grid_n);
        let all: HashSet<CoverDescriptor> = sequences(grid.len(), n)
            .into_iter()
            .map(|s| {
                descriptor_of(
                    &KSiirv::new(s.iter().map(|&i| grid[i].clone()).collect()).unwrap(),
                    &cfg,
                )
            })
            .collect();
        assert_eq!(dp, all, "n={n} k={k} N={grid_n}");
    }
}

#[test]
fn cover_growth_is_bounded_by_fan_out() {
    let cfg = CoverConfig::desk(3, 2, 0.2, 6);
    let out = cover_siirv(&cfg).unwrap();
    let mut prev = 1;
    for &s in &out.layer_sizes {
        assert!(s <= prev * out.grid_size);
        prev = s;
    }
    assert_eq!(out.layer_sizes.len(), 3);
}

#[test]
fn combining_is_associative_on_random_triples() {
    let mut rng = stream(35, 0);
    let cfg = CoverConfig::desk(3, 3, 0.2, 8);
    let part = cfg.partition();
    let grid = grid_irvs(3, 8);
    for _ in 0..100 {
        let d: Vec<CoverDescriptor> = (0..3)
            .map(|_| irv_descriptor(&grid[rng.random_range(0..grid.len())], &part, &cfg))
            .collect();
        let left = combine(&combine(&d[0], &d[1], &cfg), &d[2], &cfg);
        let right = combine(&d[0], &combine(&d[1], &d[2], &cfg), &cfg);
        assert_eq!(left, right);
    }
}

#[test]
fn high_variance_entries_match_targets() {
    let mut cfg = CoverConfig::desk(400, 4, 0.5, 10);
    cfg.sigma_sq_min = Some(50.0);
    let entries = cover_high_variance(&cfg).unwrap();
    assert!(entries.len() >= 100);
    let mut rng = stream(36, 0);
    for _ in 0..100 {
        let e = &entries[rng.random_range(0..entries.len())];
        let (mu, var) = mean_variance(&e.model);
        let big_c = ((cfg.k - 1) / e.c * e.c) as f64;
        assert!((mu - e.target_mean).abs() <= 1.0);
        assert!((var - e.target_var).abs() <= big_c * big_c);
        // every component is constant modulo c
        for irv in e.model.components() {
            let support: Vec<usize> = (0..cfg.k).filter(|&j| irv.probs()[j] > 0.0).collect();
            assert!(support
                .iter()
                .all(|&j| (j - support[0]).is_multiple_of(e.c)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn feasible_targets_are_realized(n in 20usize..300, k in 2usize..6, a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let big_c = k - 1;
        let mean = a * (n * (k - 1)) as f64;
        let var = b * (n * big_c * big_c) as f64 / 4.0;
        if let Some(model) = realize_target(n, k, big_c, mean, var) {
            let (mu, v) = mean_variance(&model);
            prop_assert!((mu - mean).abs() <= 1.0);
            prop_assert!((v - var).abs() <= (big_c * big_c) as f64);
        }
    }
}
