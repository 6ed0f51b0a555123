//! Seeded randomness.
//!
//! All randomness in the crate flows from [`Rng`], a xoshiro256++ generator
//! seeded through SplitMix64. Child seeds for trials and streams are derived
//! with [`mix`], so an experiment is fully determined by its master seed.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Name of the generator, recorded in experiment metadata.
pub const RNG_ALGORITHM: &str = "xoshiro256++ (SplitMix64 seeding)";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of child `index` from `seed`.
///
/// `mix(s, i) = splitmix64(s + (i + 1) * 0x9E3779B97F4A7C15)` (wrapping).
#[inline]
pub fn mix(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Deterministic pseudo-random source.
#[derive(Clone, Debug)]
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[0, m)` by the multiply-high method.
    ///
    /// Rejection-free: the 64-bit word `w` maps to `floor(w * m / 2^64)`.
    /// Every outcome has either `floor(2^64 / m)` or `ceil(2^64 / m)`
    /// preimages, so the relative bias is below `m / 2^64 <= 2^-32` for
    /// `m < 2^32`.
    #[inline]
    pub fn below(&mut self, m: u32) -> u32 {
        debug_assert!(m > 0);
        ((self.next_u64() as u128 * m as u128) >> 64) as u32
    }

    /// Uniform real in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
