//! Seeded random streams shared by the sampler and the region sweep.
//!
//! The generator is ChaCha20 (64-bit block counter) keyed with the seed in
//! little-endian order in the first eight key bytes, the remaining key bytes
//! and the stream id zero. A `u64` is two consecutive 32-bit output words,
//! low word first, and a uniform is `(u >> 11)·2⁻⁵³`. Because ChaCha is
//! counter based, any position in the stream can be reached directly, so
//! parallel chunks reproduce the sequential draws bit for bit.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub struct Stream {
    inner: ChaCha20Rng,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Stream {
            inner: ChaCha20Rng::from_seed(key),
        }
    }

    /// Stream positioned at the `index`-th `u64` draw.
    pub fn at(seed: u64, index: u64) -> Self {
        let mut s = Stream::new(seed);
        s.inner.set_word_pos(2 * index as u128);
        s
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Symmetric Dirichlet(1) point on the `k`-simplex via normalized
    /// exponential draws `−ln(1 − U)`.
    pub fn dirichlet_ones(&mut self, k: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..k).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            w.iter_mut().for_each(|v| *v /= total);
        } else {
            w.fill(1.0 / k as f64);
        }
        w
    }
}

/// Index of the cell whose cumulative mass first exceeds `u`; trailing
/// zero-mass cells are never returned.
pub fn inverse_cdf(masses: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &m) in masses.iter().enumerate() {
        if m <= 0.0 {
            continue;
        }
        acc += m;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
