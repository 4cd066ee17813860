//! Seeded random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream selected by a
//! `(seed, stream)` pair, so results depend only on the seed and on which
//! logical operation asked for randomness, never on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream identifiers for the crate's random consumers.
pub mod streams {
    pub const DIRECTION: u64 = 1;
    pub const ORTHOGONAL: u64 = 2;
    pub const SPSA_HESSIAN: u64 = 3;
    pub const SPSA_GRADIENT: u64 = 4;
    pub const GRAPH: u64 = 5;
    pub const SHOT_NOISE: u64 = 6;
    pub const INIT: u64 = 7;
    pub const TARGET: u64 = 8;
}

/// Generator for `seed` on the given stream.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for `seed` on `stream`, further split by a per-call `index`
/// (grid cell, evaluation number, restart).
pub fn substream(seed: u64, stream: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(index)));
    rng.set_stream(stream);
    rng
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
