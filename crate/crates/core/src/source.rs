//! Sample oracles: where learners get their i.i.d. draws from.

use rand::Rng;

use crate::dist::{exact_pmf, KSiirv};
use crate::error::{Error, Result};

pub trait SampleSource {
    /// The next `count` draws of the stream.
    fn draw(&mut self, count: usize) -> Result<Vec<i64>>;
}

impl<S: SampleSource + ?Sized> SampleSource for &mut S {
    fn draw(&mut self, count: usize) -> Result<Vec<i64>> {
        (**self).draw(count)
    }
}

/// Fresh draws from a known model, by inversion of its exact CDF (built on
/// the first draw). One uniform per draw, so large-n sources stay cheap.
pub struct ModelSource<R> {
    model: KSiirv,
    cdf: Vec<f64>,
    rng: R,
}

impl<R: Rng> ModelSource<R> {
    pub fn new(model: KSiirv, rng: R) -> Self {
        ModelSource {
            model,
            cdf: Vec::new(),
            rng,
        }
    }
}

impl<R: Rng> SampleSource for ModelSource<R> {
    fn draw(&mut self, count: usize) -> Result<Vec<i64>> {
        if self.cdf.is_empty() {
            let p = exact_pmf(&self.model);
            let mut acc = 0.0;
            self.cdf = p
                .values()
                .iter()
                .map(|v| {
                    acc += v;
                    acc
                })
                .collect();
        }
        let last = self.cdf.len() - 1;
        let total = self.cdf[last];
        Ok((0..count)
            .map(|_| {
                let u = self.rng.random::<f64>() * total;
                self.cdf.partition_point(|&c| c <= u).min(last) as i64
            })
            .collect())
    }
}

/// Replays a recorded stream in order; errors once it runs dry.
pub struct Replay {
    samples: Vec<i64>,
    pos: usize,
}

impl Replay {
    pub fn new(samples: Vec<i64>) -> Self {
        Replay { samples, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.samples.len() - self.pos
    }
}

impl SampleSource for Replay {
    fn draw(&mut self, count: usize) -> Result<Vec<i64>> {
        if count > self.remaining() {
            return Err(Error::InsufficientSamples {
                needed: self.pos + count,
                available: self.samples.len(),
            });
        }
        let out = self.samples[self.pos..self.pos + count].to_vec();
        self.pos += count;
        Ok(out)
    }
}

/// Passes draws through and keeps a copy of everything handed out.
pub struct Recording<S> {
    inner: S,
    log: Vec<i64>,
}

impl<S: SampleSource> Recording<S> {
    pub fn new(inner: S) -> Self {
        Recording {
            inner,
            log: Vec::new(),
        }
    }

    pub fn log(&self) -> &[i64] {
        &self.log
    }

    pub fn into_log(self) -> Vec<i64> {
        self.log
    }
}

impl<S: SampleSource> SampleSource for Recording<S> {
    fn draw(&mut self, count: usize) -> Result<Vec<i64>> {
        let out = self.inner.draw(count)?;
        self.log.extend_from_slice(&out);
        Ok(out)
    }
}
