//! Deterministic random number utilities.
//!
//! Everything in this crate that consumes randomness goes through one of
//! two primitives, both keyed by explicit `u64` seeds so that results are
//! reproducible bit-for-bit across runs, platforms, and thread counts:
//!
//! * [`counter_u01`] — a stateless per-counter uniform draw. Edge `i` of a
//!   percolation sample is retained iff `counter_u01(seed, i) < p`, so the
//!   decision for an edge never depends on how the edge stream was
//!   partitioned among threads.
//! * [`Stream`] — a tiny sequential generator (SplitMix64) for the places
//!   that genuinely need a stream (randomized growth, restarts, shuffles).

/// 64-bit finalizer from the SplitMix64 family. Bijective, so distinct
/// inputs never collide.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Stateless uniform variate in `[0, 1)` for a (seed, counter) pair.
#[inline]
pub fn counter_u01(seed: u64, counter: u64) -> f64 {
    let z = mix64(seed ^ mix64(counter.wrapping_add(GOLDEN)));
    // Top 53 bits -> dyadic rational in [0, 1).
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct Stream {
    state: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream { state: seed }
    }

    /// Derive an independent child stream; used to give each replicate or
    /// restart its own seed without correlating draws.
    pub fn child(&self, tag: u64) -> Self {
        Stream::new(mix64(self.state ^ mix64(tag.wrapping_add(GOLDEN))))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    #[inline]
    pub fn next_u01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` via 128-bit multiply-shift.
    /// `n` must be nonzero.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            xs.swap(i, j);
        }
    }
}
