//! Deterministic random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] keyed by a
//! triple `(master, tag, index)`. The triple is folded into a single 64-bit
//! seed by three rounds of SplitMix64:
//!
//! ```text
//! s1 = splitmix(master)
//! s2 = splitmix(s1 ^ tag)
//! s3 = splitmix(s2 ^ index)
//! rng = ChaCha8Rng::seed_from_u64(s3)
//! ```
//!
//! `tag` names the consumer (see [`tags`]) and `index` is the ensemble
//! member, jump number or time step. Two streams share no state, so
//! ensembles can be evaluated in any order or in parallel.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Stream tags used inside the crate.
pub mod tags {
    pub const SUBORDINATOR: u64 = 0x5355_4230;
    pub const PATH: u64 = 0x5041_5448;
    pub const MARK: u64 = 0x4d41_524b;
    pub const CONTINUOUS: u64 = 0x434f_4e54;
    pub const INCREMENT: u64 = 0x494e_4352;
    pub const FIELD: u64 = 0x4649_454c;
    pub const NODES: u64 = 0x4e4f_4445;
    pub const POISSON: u64 = 0x504f_4953;
    pub const SIGNS: u64 = 0x5349_474e;
    pub const INSTANCE: u64 = 0x494e_5354;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `(master, tag, index)` into a child seed.
pub fn derive_seed(master: u64, tag: u64, index: u64) -> u64 {
    let s1 = splitmix64(master);
    let s2 = splitmix64(s1 ^ tag);
    splitmix64(s2 ^ index)
}

/// Independent generator for `(master, tag, index)`.
pub fn stream(master: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, tag, index))
}
