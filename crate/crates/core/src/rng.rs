//! Deterministic random substreams.
//!
//! Every parallel task (a Monte Carlo replicate, an envelope refit) gets its
//! own ChaCha8 stream keyed by the global seed and the task's coordinates, so
//! results do not depend on how tasks are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The random stream type used everywhere in the crate.
pub type Stream = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a seed with an arbitrary list of task coordinates into a 64-bit key.
pub fn derive_key(seed: u64, coords: &[u64]) -> u64 {
    coords
        .iter()
        .fold(splitmix64(seed), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

/// Stream seeded directly from `seed`.
pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent substream for the task at `coords` under `seed`.
pub fn substream(seed: u64, coords: &[u64]) -> Stream {
    ChaCha8Rng::seed_from_u64(derive_key(seed, coords))
}
