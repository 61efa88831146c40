//! File formats: models, hypotheses, dense pmfs and sample lists.
//!
//! Hypotheses are stored in one of three JSON shapes, told apart by their keys:
//! `{"modulus", "window_lo", "entries"}` (sparse Fourier), `{"c", "mu",
//! "sigma_sq", "remainder"}` (Gaussian plus IRV) and `{"lo", "values"}` with an
//! optional `"kind"` (dense pmf).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dist::{KSiirv, Pmf};
use crate::error::{Error, Result};
use crate::fourier::SparseDft;
use crate::hypothesis::{DiscretizedNormal, GaussianPlusIrv, Hypothesis};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub lo: i64,
    pub values: Vec<f64>,
}

impl PmfFile {
    pub fn from_pmf(p: &Pmf, kind: Option<&str>) -> Self {
        PmfFile {
            kind: kind.map(str::to_owned),
            lo: p.lo(),
            values: p.values().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GaussianFile {
    c: usize,
    mu: f64,
    sigma_sq: f64,
    /// Probabilities of `0..c-1`.
    remainder: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum HypothesisFile {
    Sparse(SparseDft),
    Gaussian(GaussianFile),
    Dense(PmfFile),
}

impl Serialize for Hypothesis {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = match self {
            Hypothesis::SparseFourier(d) => HypothesisFile::Sparse(d.clone()),
            Hypothesis::GaussianPlusIrv(g) => HypothesisFile::Gaussian(GaussianFile {
                c: g.c(),
                mu: g.gaussian().mu,
                sigma_sq: g.gaussian().sigma_sq,
                remainder: (0..g.c() as i64).map(|i| g.remainder().get(i)).collect(),
            }),
            Hypothesis::Empirical(p) | Hypothesis::Mollified(p) => {
                HypothesisFile::Dense(PmfFile::from_pmf(p, Some(self.kind())))
            }
        };
        f.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Hypothesis {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match HypothesisFile::deserialize(d)? {
            HypothesisFile::Sparse(s) => Ok(Hypothesis::SparseFourier(s)),
            HypothesisFile::Gaussian(g) => {
                if !(g.sigma_sq >= 0.0 && g.mu.is_finite()) {
                    return Err(D::Error::custom("bad normal parameters"));
                }
                GaussianPlusIrv::new(
                    g.c,
                    DiscretizedNormal::new(g.mu, g.sigma_sq),
                    Pmf::new(0, g.remainder),
                )
                .map(Hypothesis::GaussianPlusIrv)
                .map_err(D::Error::custom)
            }
            HypothesisFile::Dense(p) => {
                let pmf = Pmf::new(p.lo, p.values);
                match p.kind.as_deref() {
                    Some("empirical") => Ok(Hypothesis::Empirical(pmf)),
                    Some("mollified") => Ok(Hypothesis::Mollified(pmf)),
                    // without a tag, negative entries can only come from a mollified estimate
                    None if pmf.values().iter().any(|&v| v < 0.0) => Ok(Hypothesis::Mollified(pmf)),
                    None => Ok(Hypothesis::Empirical(pmf)),
                    Some(other) => Err(D::Error::custom(format!("unknown pmf kind {other:?}"))),
                }
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: std::result::Result<T, serde_json::Error>) -> Result<T> {
    r.map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

pub fn read_model(path: &Path) -> Result<KSiirv> {
    with_path(path, serde_json::from_str(&read(path)?))
}

pub fn read_hypothesis(path: &Path) -> Result<Hypothesis> {
    with_path(path, serde_json::from_str(&read(path)?))
}

pub fn read_pmf(path: &Path) -> Result<Pmf> {
    let f: PmfFile = with_path(path, serde_json::from_str(&read(path)?))?;
    Ok(Pmf::new(f.lo, f.values))
}

/// One integer per line; blank lines are ignored.
pub fn parse_samples(text: &str) -> Result<Vec<i64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("line {}: {e}: {l:?}", i + 1)))
        })
        .collect()
}

pub fn read_samples(path: &Path) -> Result<Vec<i64>> {
    parse_samples(&read(path)?)
}

pub fn format_samples(samples: &[i64]) -> String {
    let mut out = String::with_capacity(samples.len() * 6);
    for s in samples {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Writes to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::collections::BTreeMap;

    #[test]
    fn hypotheses_round_trip() {
        let sparse = SparseDft::new(
            5,
            -2,
            BTreeMap::from([
                (0, Complex64::new(1.0, 0.0)),
                (1, Complex64::new(0.2, 0.1)),
                (4, Complex64::new(0.2, -0.1)),
            ]),
        )
        .unwrap();
        let gauss = GaussianPlusIrv::new(
            2,
            DiscretizedNormal::new(3.5, 2.0),
            Pmf::new(0, vec![0.25, 0.75]),
        )
        .unwrap();
        for h in [
            Hypothesis::SparseFourier(sparse),
            Hypothesis::GaussianPlusIrv(gauss),
            Hypothesis::Empirical(Pmf::new(3, vec![0.5, 0.5])),
            Hypothesis::Mollified(Pmf::new(-1, vec![0.6, 0.5, -0.1])),
        ] {
            let text = serde_json::to_string(&h).unwrap();
            let back: Hypothesis = serde_json::from_str(&text).unwrap();
            assert_eq!(back, h, "{text}");
        }
    }

    #[test]
    fn untagged_pmf_is_classified_by_sign() {
        let h: Hypothesis =
            serde_json::from_str(r#"{"lo": 0, "values": [0.5, -0.1, 0.6]}"#).unwrap();
        assert_eq!(h.kind(), "mollified");
        let h: Hypothesis = serde_json::from_str(r#"{"lo": 0, "values": [0.5, 0.5]}"#).unwrap();
        assert_eq!(h.kind(), "empirical");
        let sparse: Hypothesis =
            serde_json::from_str(r#"{"modulus": 3, "window_lo": 0, "entries": [[0, 1.0, 0.0]]}"#)
                .unwrap();
        assert_eq!(sparse.kind(), "sparse_fourier");
    }

    #[test]
    fn sample_lines() {
        assert_eq!(parse_samples("3\n-2\n\n 7 \n").unwrap(), vec![3, -2, 7]);
        assert!(parse_samples("3\nx\n").is_err());
        assert_eq!(format_samples(&[1, -4]), "1\n-4\n");
    }
}
