//! Deterministic RNG substreams.
//!
//! A substream seed is derived from a master seed and a path of indices
//! (for example `[point, realization]`) by folding each index through
//! SplitMix64: `h0 = mix(master)`, `h_{k+1} = mix(h_k ^ mix(index_k + GOLDEN))`.
//! The resulting seed keys a ChaCha8 generator. Tasks that own distinct paths
//! therefore draw independent streams regardless of scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn substream_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix(master), |h, &i| mix(h ^ mix(i.wrapping_add(GOLDEN))))
}

pub fn substream(master: u64, path: &[u64]) -> StreamRng {
    StreamRng::seed_from_u64(substream_seed(master, path))
}
