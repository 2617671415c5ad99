//! Explicit, splittable seeding.
//!
//! Every random draw in the crate is made from a [`ChaCha20Rng`] built from a
//! 64-bit seed. Child seeds are derived with [`split`], so independent tasks
//! (restarts, sweep cases) get independent streams no matter which order or
//! thread they run on.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type Rng = ChaCha20Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child stream `index` from `seed`.
pub fn split(seed: u64, index: u64) -> u64 {
    mix(mix(seed.wrapping_add(0x9e37_79b9_7f4a_7c15)) ^ mix(index.wrapping_mul(0xd1b5_4a32_d192_ed03)))
}

pub fn rng(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}
