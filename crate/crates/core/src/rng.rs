//! Seeded random streams and a bit-counting wrapper for the sampler.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent generator for `(seed, stream)`. Distinct stream ids never overlap.
pub fn stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// A source of uniform random bits that reports how many it has handed out.
pub trait BitSource {
    fn next_bit(&mut self) -> bool;
    fn bits_consumed(&self) -> u64;
}

pub struct RngBits<R> {
    rng: R,
    buf: u64,
    left: u32,
    consumed: u64,
}

impl<R: RngCore> RngBits<R> {
    pub fn new(rng: R) -> Self {
        RngBits {
            rng,
            buf: 0,
            left: 0,
            consumed: 0,
        }
    }
}

impl<R: RngCore> BitSource for RngBits<R> {
    fn next_bit(&mut self) -> bool {
        if self.left == 0 {
            self.buf = self.rng.next_u64();
            self.left = 64;
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.left -= 1;
        self.consumed += 1;
        b
    }

    fn bits_consumed(&self) -> u64 {
        self.consumed
    }
}

/// Replays a fixed bit string, then zeros.
pub struct FixedBits {
    bits: Vec<bool>,
    pos: usize,
}

impl FixedBits {
    pub fn new(bits: Vec<bool>) -> Self {
        FixedBits { bits, pos: 0 }
    }
}

impl BitSource for FixedBits {
    fn next_bit(&mut self) -> bool {
        let b = self.bits.get(self.pos).copied().unwrap_or(false);
        self.pos += 1;
        b
    }

    fn bits_consumed(&self) -> u64 {
        self.pos as u64
    }
}
