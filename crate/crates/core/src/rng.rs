//! Keyed random streams.
//!
//! Every stream is a ChaCha8 keystream addressed by `(seed, unit, stream)`:
//! the seed fixes the key, `unit` (a replicate or a bootstrap chunk) and
//! `stream` pick the 64-bit stream id, and the block counter walks the
//! stream. Two streams with different addresses never overlap, and a stream
//! can be rebuilt from its address alone, so work units may run in any order
//! on any number of threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::stats::normal_quantile;

/// Bits reserved for the `stream` field of the stream id.
const STREAM_BITS: u32 = 16;

#[derive(Debug, Clone)]
pub struct KeyedRng {
    inner: ChaCha8Rng,
}

impl KeyedRng {
    /// `unit` must be below 2^48 and `stream` below 2^16.
    pub fn new(seed: u64, unit: u64, stream: u64) -> Self {
        debug_assert!(unit < 1 << (64 - STREAM_BITS));
        debug_assert!(stream < 1 << STREAM_BITS);
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream((unit << STREAM_BITS) | stream);
        Self { inner }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1), 53 bits.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        normal_quantile(self.uniform_open())
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform_open() < p
    }
}
