//! Seed fan-out: one master seed, counter-derived substreams.
//!
//! Every stochastic stage of the pipeline derives its own seed from the
//! master with [`split_seed`], and row/permutation loops get an independent
//! ChaCha stream per index via [`indexed_rng`]. Work can then be sharded in
//! any order (or in parallel) without changing a single sampled bit.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One round of SplitMix64 over `(master, index)`.
pub fn split_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// RNG seeded from `seed`, positioned on substream `index`.
pub fn indexed_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// RNG for a whole stage (no substream structure needed).
pub fn stage_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
