//! 64-bit mixing finalizer and the deterministic RNG stream built on it.
//!
//! Every seed-derived quantity in this crate — per-sequence keys and nonces, LCG initial
//! states, biased-bit draws, and permutation-shuffle randomness — goes through [`mix64`],
//! the three-stage multiply/xor-shift finalizer known from splitmix64. Centralizing on one
//! mixer keeps the whole pipeline reproducible from a single `u64` master seed with no
//! external RNG dependency.

/// Mixing finalizer: bijective on `u64`, with strong avalanche behavior.
///
/// This is the splitmix64 output function: a golden-ratio pre-increment followed by two
/// multiply/xor-shift rounds and a final shift.
#[inline]
pub fn mix64(v: u64) -> u64 {
    let mut z = v.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic RNG stream: `mix64` applied to an incrementing counter.
///
/// Used where a sequence of independent draws is needed (e.g. the permutation-shuffle in
/// the null baseline and randomized test-case generation). Not a cryptographic RNG; it is
/// a reproducibility tool.
#[derive(Debug, Clone)]
pub struct MixStream {
    counter: u64,
}

impl MixStream {
    pub fn new(seed: u64) -> Self {
        // Pre-mix the seed so streams for adjacent seeds do not share a counter range.
        MixStream { counter: mix64(seed) }
    }

    /// Next 64-bit draw.
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.counter)
    }

    /// Uniform draw in `[0, bound)` via the widening multiply-shift reduction.
    ///
    /// The reduction has bias below 2⁻⁴⁸ for any bound this crate uses; what matters here
    /// is determinism, not statistical perfection.
    #[inline]
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        ((self.next_u64() as u128 * bound as u128) >> 64) as u64
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
