//! Deterministic, platform-independent randomness.
//!
//! All stochastic operations in this crate draw from [`Rng`], a thin wrapper
//! around the ChaCha8 counter-based generator. A given `(seed, stream)` pair
//! produces the same value sequence on every platform, which is what makes
//! golden regression tests bit-stable.
//!
//! Parallel chains never share a generator: they receive forks. A fork is
//! derived from the parent's identity `(seed, stream)` and the child id, not
//! from the parent's current position, so the same fork call always yields
//! the same child stream no matter how many values were drawn before it.

use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Seeded counter-based generator (ChaCha8, 64-bit seed + 64-bit stream id).
#[derive(Clone, Debug)]
pub struct Rng {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

/// SplitMix64 finalizer; used to mix stream ids so nested forks stay distinct.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Rng {
    /// Root generator for a run: stream 0 of the given seed.
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator for `(self, id)`. Position-independent: forking after
    /// drawing values gives the same child as forking before.
    pub fn fork(&self, id: u64) -> Self {
        Self::with_stream(self.seed, mix64(self.stream ^ mix64(id)))
    }

    /// One standard-normal draw (ziggurat).
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform index in `[0, n)`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be non-empty");
        self.inner.gen_range(0..n)
    }

    /// Uniform integer in `[lo, hi]` inclusive.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        assert!(lo <= hi);
        self.inner.gen_range(lo..=hi)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// In-place Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.inner.gen_range(0..=i);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = Rng::new(1);
        let mut b = Rng::new(2);
        let any_diff = (0..1000).any(|_| a.next_u64() != b.next_u64());
        assert!(any_diff);
    }

    #[test]
    fn fork_is_position_independent() {
        let mut a = Rng::new(7);
        let b = Rng::new(7);
        let fork_before = b.fork(3);
        for _ in 0..17 {
            a.next_u64();
        }
        let fork_after = a.fork(3);
        let mut x = fork_before;
        let mut y = fork_after;
        for _ in 0..100 {
            assert_eq!(x.next_u64(), y.next_u64());
        }
    }

    #[test]
    fn forks_with_distinct_ids_differ() {
        let root = Rng::new(7);
        let mut a = root.fork(1);
        let mut b = root.fork(2);
        let any_diff = (0..100).any(|_| a.next_u64() != b.next_u64());
        assert!(any_diff);
    }
}
