//! Seeded RNG construction shared by all randomized operations.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Deterministic stream for a caller-supplied seed. ChaCha keeps the stream
/// identical across platforms and word sizes.
pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
