//! Seedable randomness with hierarchical substream derivation.
//!
//! All stochastic code in this crate draws from [`Stream`], a ChaCha8 generator
//! seeded through a SplitMix64 chain. The algorithm is fixed here (rather than
//! using the standard library's or `rand`'s unspecified default) so that a
//! given seed reproduces the same draws on every platform and every run.
//!
//! Substreams are derived hierarchically from a master seed and a path of
//! indices (experiment → cell → trial). Each path element is mixed into the
//! running state with SplitMix64, so sibling substreams are statistically
//! independent and adding new cells never perturbs existing ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The concrete generator used throughout the crate.
pub type Stream = ChaCha8Rng;

/// SplitMix64 output function (Steele, Lea & Flood finalizer).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Collapse a master seed and an index path into a single 64-bit substream seed.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &index in path {
        state = splitmix64(state ^ splitmix64(index));
    }
    state
}

/// Open the substream addressed by `(master, path)`.
pub fn stream(master: u64, path: &[u64]) -> Stream {
    Stream::seed_from_u64(derive_seed(master, path))
}
