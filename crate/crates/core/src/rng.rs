//! Seeded randomness.
//!
//! Every random source in the crate is a ChaCha8 stream keyed by a `u64`
//! seed. ChaCha output is specified independently of platform and word size,
//! so a `(seed, generator)` pair recorded in metadata replays bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifier written into metadata next to every seed.
pub const GENERATOR_ID: &str = "chacha8-rand0.9";

pub type DigitRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> DigitRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent child seed, e.g. one per block of a schedule.
///
/// SplitMix64 finalizer over `seed` and `stream`; distinct streams give
/// decorrelated seeds and the mapping never changes.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
