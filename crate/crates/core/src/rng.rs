//! Deterministic seed derivation.
//!
//! All randomness flows from one top-level seed; components derive their own
//! streams by hashing `(label, seed)` so that adding a consumer never shifts
//! the draws seen by another.

use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Stable sub-seed for a named component.
pub fn derive_seed(label: &str, seed: u64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(label.as_bytes());
    hasher.update(seed.to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

/// RNG for a named component.
pub fn component_rng(label: &str, seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(derive_seed(label, seed))
}
