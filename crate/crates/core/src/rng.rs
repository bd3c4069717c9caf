//! Counter-based seed derivation.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded from a root
//! seed and a path of counters (run index, iteration index, trial index...).
//! Streams never share state, so work can be scheduled in any order and still
//! reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `root` and a counter path.
pub fn subseed(root: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(root), |acc, &c| splitmix64(acc ^ splitmix64(c.wrapping_add(0x632b_e59b_d9b4_e019))))
}

pub fn stream(root: u64, path: &[u64]) -> Rng {
    Rng::seed_from_u64(subseed(root, path))
}
