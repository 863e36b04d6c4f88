//! Seed fan-out: every random consumer derives its own stream from one seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels used across the pipeline.
pub mod stream {
    pub const JITTER: &str = "sim/jitter";
    pub const NOISE: &str = "sim/noise";
    pub const FOLDS: &str = "eval/folds";
    pub const VOTE: &str = "classify/vote";
}

/// Derive a sub-seed for `label` from `seed` (FNV-1a over the label, then splitmix64).
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    splitmix64(seed ^ h)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, label))
}
