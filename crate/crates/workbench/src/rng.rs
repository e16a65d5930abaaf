//! Seeded randomness for instance generation.
//!
//! Generator version 1 draws every value from SplitMix64 (state += 0x9e3779b97f4a7c15,
//! then the standard two multiply-xorshift rounds), seeded with the raw 64-bit seed.
//! A bounded draw maps `x` to `(x * bound) >> 64`. Nothing else touches the stream,
//! so a seed means the same instance in any implementation that follows these rules.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub const GENERATOR_VERSION: u64 = 1;

pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform-ish value in `[0, bound)`; `bound` must be positive.
    pub fn below(&mut self, bound: u64) -> u64 {
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// The low `width` bits of one draw.
    pub fn bits(&mut self, width: usize) -> u64 {
        self.next_u64() & longchoice_core::function::low_mask(width)
    }
}
