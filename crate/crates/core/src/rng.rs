//! Seed derivation shared by every randomised component.
//!
//! Each random stream is keyed by `(seed, domain, index)` so that trials,
//! splits and training runs draw from independent generators regardless of
//! execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream domains. Values are part of the reproducibility contract.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub enum Domain {
    DenseCode = 1,
    SparseCode = 2,
    HillClimb = 3,
    NetworkInit = 4,
    Shuffle = 5,
    Split = 6,
    SplitTraining = 7,
    Synthetic = 8,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(seed: u64, domain: Domain, index: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(seed) ^ domain as u64) ^ index)
}

pub fn stream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, domain, index))
}
