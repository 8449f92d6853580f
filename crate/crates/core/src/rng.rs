//! Deterministic, splittable random-number streams.
//!
//! Every stochastic routine in this crate receives an [`RngStream`], a
//! `(seed, stream_id)` pair naming one counter-based ChaCha8 stream.
//! Identical pairs reproduce identical draws bit-for-bit on one build, and
//! distinct stream ids give statistically independent streams, so Monte
//! Carlo replicas can be fanned out across threads in any order without
//! changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Name of one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derive a child stream. Children with distinct tags do not collide
    /// with each other or the parent except with probability ~2^-64.
    pub fn substream(&self, tag: u64) -> RngStream {
        RngStream {
            seed: self.seed,
            stream_id: splitmix64(self.stream_id ^ splitmix64(tag.wrapping_add(0x9e37_79b9_7f4a_7c15))),
        }
    }

    /// Stream for replica `r` of experiment unit `e` (order-independent
    /// parallelism: the stream depends only on the pair, not on scheduling).
    pub fn replica(&self, unit: u64, r: u64) -> RngStream {
        self.substream(splitmix64(unit).wrapping_add(r))
    }
}

/// SplitMix64 finalizer; a fixed, build-independent 64-bit mixer.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fan `n` Monte Carlo replicas out over the thread pool.
///
/// Replica `i` runs on `stream.substream(i+1)`; results come back indexed
/// by replica, so any reduction over them is scheduling-independent.
pub fn mc_fanout<T, F>(n: usize, stream: RngStream, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, RngStream) -> T + Sync,
{
    (0..n)
        .into_par_iter()
        .map(|i| f(i, stream.substream(i as u64 + 1)))
        .collect()
}
