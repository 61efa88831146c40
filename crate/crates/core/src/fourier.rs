//! DFT modulo `M` with `e(x) = exp(-2πix)`: `P̂(ξ) = Σ_j e(ξj/M) P(j)`.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dist::Pmf;
use crate::error::{Error, Result};

/// `e(num / modulus)`, reducing the numerator exactly before taking the angle.
pub fn e_frac(num: i64, modulus: u64) -> Complex64 {
    let r = (num as i128).rem_euclid(modulus as i128) as f64;
    let theta = -2.0 * std::f64::consts::PI * r / modulus as f64;
    Complex64::new(theta.cos(), theta.sin())
}

/// Succinct hypothesis: DFT values on a few frequencies, all others zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseDft {
    modulus: u64,
    window_lo: i64,
    entries: BTreeMap<u64, Complex64>,
}

impl SparseDft {
    pub fn new(modulus: u64, window_lo: i64, entries: BTreeMap<u64, Complex64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        match entries.get(&0) {
            Some(z) if (z - Complex64::new(1.0, 0.0)).norm() <= 1e-12 => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "entry at frequency 0 must be 1".into(),
                ))
            }
        }
        for (&xi, z) in &entries {
            if xi >= modulus {
                return Err(Error::InvalidArgument(format!(
                    "frequency {xi} outside [0, {modulus})"
                )));
            }
            if z.norm() > 1.0 + 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "|entry {xi}| = {} exceeds 1",
                    z.norm()
                )));
            }
        }
        Ok(SparseDft {
            modulus,
            window_lo,
            entries,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn window_lo(&self) -> i64 {
        self.window_lo
    }

    pub fn window_hi(&self) -> i64 {
        self.window_lo + self.modulus as i64 - 1
    }

    pub fn entries(&self) -> &BTreeMap<u64, Complex64> {
        &self.entries
    }

    pub fn get(&self, xi: u64) -> Complex64 {
        self.entries.get(&xi).copied().unwrap_or_default()
    }

    /// `H(x) = (1/M) Σ_ξ e(-ξx/M) Ĥ(ξ)`, real part; zero outside the window.
    pub fn value_at(&self, x: i64) -> f64 {
        if x < self.window_lo || x > self.window_hi() {
            return 0.0;
        }
        let s: f64 = self
            .entries
            .iter()
            .map(|(&xi, z)| (e_frac(-reduce_product(xi, x, self.modulus), self.modulus) * z).re)
            .sum();
        s / self.modulus as f64
    }
}

/// Wire format `{"modulus", "window_lo", "entries": [[xi, re, im], ..]}`.
#[derive(Serialize, Deserialize)]
struct SparseDftFile {
    modulus: u64,
    window_lo: i64,
    entries: Vec<(u64, f64, f64)>,
}

impl Serialize for SparseDft {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SparseDftFile {
            modulus: self.modulus,
            window_lo: self.window_lo,
            entries: self
                .entries
                .iter()
                .map(|(&xi, z)| (xi, z.re, z.im))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparseDft {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = SparseDftFile::deserialize(d)?;
        let entries = f
            .entries
            .into_iter()
            .map(|(xi, re, im)| (xi, Complex64::new(re, im)))
            .collect();
        SparseDft::new(f.modulus, f.window_lo, entries).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavySet {
    modulus: u64,
    frequencies: Vec<u64>,
}

impl HeavySet {
    /// Sorted, deduplicated, always containing 0.
    pub fn new(modulus: u64, frequencies: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut set: BTreeSet<u64> = frequencies.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&xi| xi >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "frequency {bad} outside [0, {modulus})"
            )));
        }
        set.insert(0);
        Ok(HeavySet {
            modulus,
            frequencies: set.into_iter().collect(),
        })
    }

    pub fn full(modulus: u64) -> Self {
        HeavySet {
            modulus,
            frequencies: (0..modulus).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    pub fn contains(&self, xi: u64) -> bool {
        self.frequencies.binary_search(&xi).is_ok()
    }

    /// Adds `M - ξ` for every member, so real inverses stay real.
    pub fn symmetrized(&self) -> HeavySet {
        let m = self.modulus;
        let all = self.frequencies.iter().flat_map(|&x| [x, (m - x) % m]);
        HeavySet::new(m, all).expect("frequencies already in range")
    }
}

pub fn dft_point(p: &Pmf, modulus: u64, xi: u64) -> Complex64 {
    p.values()
        .iter()
        .enumerate()
        .filter(|(_, &v)| v != 0.0)
        .map(|(j, &v)| e_frac(reduce_product(xi, p.lo() + j as i64, modulus), modulus) * v)
        .sum()
}

/// `ξ·x mod M` without overflow.
pub(crate) fn reduce_product(xi: u64, x: i64, modulus: u64) -> i64 {
    ((xi as i128 * x as i128).rem_euclid(modulus as i128)) as i64
}

pub fn empirical_dft(samples: &[i64], modulus: u64, frequencies: &HeavySet) -> Result<SparseDft> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    if frequencies.modulus() != modulus {
        return Err(Error::InvalidArgument(
            "frequency set built for a different modulus".into(),
        ));
    }
    let mut residues: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in samples {
        *residues
            .entry(x.rem_euclid(modulus as i64) as u64)
            .or_default() += 1;
    }
    let n = samples.len() as f64;
    let mut entries = BTreeMap::new();
    for &xi in frequencies.frequencies() {
        let z = if xi == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            residues
                .iter()
                .map(|(&r, &c)| e_frac(reduce_product(xi, r as i64, modulus), modulus) * c as f64)
                .sum::<Complex64>()
                / n
        };
        entries.insert(xi, z);
    }
    SparseDft::new(modulus, 0, entries)
}

/// Inverse DFT onto `[window_lo, window_lo + M - 1]`.
pub fn inverse_dft(dft: &SparseDft) -> Result<Pmf> {
    let m = dft.modulus();
    let mut values = Vec::with_capacity(m as usize);
    let mut worst_im = 0.0f64;
    for j in dft.window_lo()..=dft.window_hi() {
        let z: Complex64 = dft
            .entries()
            .iter()
            .map(|(&xi, v)| e_frac(-reduce_product(xi, j, m), m) * v)
            .sum::<Complex64>()
            / m as f64;
        worst_im = worst_im.max(z.im.abs());
        values.push(z.re);
    }
    if worst_im > 1e-6 {
        return Err(Error::ImaginaryResidual(worst_im));
    }
    Ok(Pmf::new(dft.window_lo(), values))
}

/// Every ξ whose `ξ/M` lies within `√ln(1/δ)/σ̃` of a fraction `a/b`, `0 ≤ a ≤ b < k`.
pub fn heavy_support_set(modulus: u64, k: usize, sigma_tilde: f64, delta: f64) -> Result<HeavySet> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in (0, 1/2), got {delta}"
        )));
    }
    if !(sigma_tilde > 0.0 && (modulus as f64) > sigma_tilde) {
        return Err(Error::InvalidArgument(format!(
            "need modulus > sigma_tilde > 0, got M={modulus}, sigma_tilde={sigma_tilde}"
        )));
    }
    let radius = (1.0 / delta).ln().sqrt() / sigma_tilde;
    heavy_set_with_radius(modulus, k, radius)
}

/// Neighborhoods of radius `radius` (in `ξ/M` units) around all fractions `a/b`, `b < k`.
pub fn heavy_set_with_radius(modulus: u64, k: usize, radius: f64) -> Result<HeavySet> {
    if radius >= 0.5 {
        return Ok(HeavySet::full(modulus));
    }
    let mf = modulus as f64;
    let mut set = BTreeSet::new();
    for b in 1..k.max(2) {
        for a in 0..=b {
            let c = a as f64 / b as f64;
            let lo = ((c - radius) * mf).ceil() as i64;
            let hi = ((c + radius) * mf).floor() as i64;
            for xi in lo..=hi {
                set.insert(xi.rem_euclid(modulus as i64) as u64);
            }
        }
    }
    HeavySet::new(modulus, set)
}

/// `√((1/M) Σ_ξ |a(ξ) - b(ξ)|²)`, missing entries counted as zero.
pub fn plancherel_l2(a: &SparseDft, b: &SparseDft) -> Result<f64> {
    if a.modulus() != b.modulus() {
        return Err(Error::InvalidArgument("moduli differ".into()));
    }
    let keys: BTreeSet<u64> = a
        .entries()
        .keys()
        .chain(b.entries().keys())
        .copied()
        .collect();
    let s: f64 = keys
        .into_iter()
        .map(|xi| (a.get(xi) - b.get(xi)).norm_sqr())
        .sum();
    Ok((s / a.modulus() as f64).sqrt())
}
