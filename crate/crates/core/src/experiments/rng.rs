//! Keyed splitmix64 streams.
//!
//! Every random draw is a pure function of `(seed, trial, index)`, so results do not
//! depend on how trials are scheduled across threads. The trial stream state is the
//! `trial`-th output of a splitmix64 generator seeded with `seed`; draw `index` is the
//! `index`-th output of a splitmix64 generator seeded with that state.

const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Output `index` (0-based) of a splitmix64 generator whose state starts at `state`.
#[inline]
pub fn splitmix64_at(state: u64, index: u64) -> u64 {
    mix64(state.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

#[derive(Debug, Clone, Copy)]
pub struct KeyedStream {
    state: u64,
}

impl KeyedStream {
    pub fn new(seed: u64, trial: u64) -> Self {
        KeyedStream {
            state: splitmix64_at(seed, trial),
        }
    }

    #[inline]
    pub fn u64_at(&self, index: u64) -> u64 {
        splitmix64_at(self.state, index)
    }

    /// Uniform real in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn unit_at(&self, index: u64) -> f64 {
        (self.u64_at(index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Integer in `0..bound` by multiply-shift; bias is below `bound / 2^64`.
    #[inline]
    pub fn below_at(&self, index: u64, bound: u64) -> u64 {
        ((self.u64_at(index) as u128 * bound as u128) >> 64) as u64
    }
}
