//! Counter-based randomness: the stream for attempt `i` depends only on
//! `(seed, i)`, so attempts can run in any order on any number of threads.

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Avalanche-mixes the attempt index into the seed.
pub fn attempt_key(seed: u64, attempt: u64) -> u64 {
    mix64(seed ^ mix64(attempt.wrapping_mul(GOLDEN_GAMMA).wrapping_add(GOLDEN_GAMMA)))
}

/// Generator for one attempt.
pub struct AttemptRng {
    inner: Xoshiro256PlusPlus,
}

impl AttemptRng {
    pub fn new(seed: u64, attempt: u64) -> Self {
        Self { inner: Xoshiro256PlusPlus::seed_from_u64(attempt_key(seed, attempt)) }
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform on `(0, scale]`.
    pub fn positive(&mut self, scale: f64) -> f64 {
        scale * (1.0 - self.unit())
    }

    /// Uniform on `[-scale, scale]` (endpoints up to rounding).
    pub fn symmetric(&mut self, scale: f64) -> f64 {
        scale * (2.0 * self.unit() - 1.0)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.unit() < p
    }
}
