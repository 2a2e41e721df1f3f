//! Deterministic randomness plumbing.
//!
//! Two generators are used throughout the crate:
//!
//! * [`Prf`], a counter-based generator: `word(stream, i)` is a pure
//!   function of `(key, stream, i)`. Lazily evaluated oracle segments use
//!   it so that the same index always resolves to the same bits, no matter
//!   in which order segments are requested.
//! * `ChaCha8Rng` (constructed via [`sampling_rng`]) for sequential
//!   Monte-Carlo sampling streams keyed by `(seed, shard)`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Keyed counter-based pseudo-random function over 64-bit words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Prf {
    key: u64,
}

impl Prf {
    pub fn new(key: u64) -> Self {
        Prf {
            key: splitmix64(key ^ 0x6a09_e667_f3bc_c908),
        }
    }

    /// Word `i` of stream `stream`; random access, no state.
    pub fn word(&self, stream: u64, i: u64) -> u64 {
        splitmix64(self.key ^ splitmix64(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ splitmix64(i)))
    }

    /// A derived key for an independent sub-stream.
    pub fn derive(&self, tag: u64) -> Prf {
        Prf {
            key: splitmix64(self.key ^ splitmix64(tag ^ 0xbb67_ae85_84ca_a73b)),
        }
    }
}

/// Sequential sampling stream for `(seed, shard)`. Shards are independent,
/// so randomness ranges can be split across workers and merged in any order.
pub fn sampling_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(shard)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::RngCore;

    #[test]
    fn prf_is_pure_and_stream_separated() {
        let prf = Prf::new(42);
        assert_eq!(prf.word(3, 7), prf.word(3, 7));
        assert_ne!(prf.word(3, 7), prf.word(3, 8));
        assert_ne!(prf.word(3, 7), prf.word(4, 7));
        assert_ne!(Prf::new(42).word(0, 0), Prf::new(43).word(0, 0));
    }

    #[test]
    fn sampling_rng_reproducible() {
        let mut a = sampling_rng(7, 0);
        let mut b = sampling_rng(7, 0);
        assert_eq!(a.next_u64(), b.next_u64());
        let mut c = sampling_rng(7, 1);
        assert_ne!(sampling_rng(7, 0).next_u64(), c.next_u64());
    }
}
