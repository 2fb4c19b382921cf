//! Reproducible random substreams.
//!
//! Every draw is keyed by `(seed, period, stream)`: the seed selects a
//! ChaCha8 key and the period/stream pair selects the ChaCha stream, so
//! traces do not depend on iteration order or thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Stream ids at or above this value belong to the public monitor.
pub const MONITOR_STREAM: u64 = 1 << 15;
/// Stream id used for strategy-level randomness (tester selection etc.).
pub const AUX_STREAM: u64 = 1 << 14;

/// A generator dedicated to one `(seed, period, stream)` triple.
pub fn substream(seed: u64, period: u64, stream: u64) -> ChaCha8Rng {
    debug_assert!(period < 1 << 47 && stream < 1 << 16);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((period << 16) | stream);
    rng
}

/// Uniform draw in `[0, 1)` from a substream.
pub fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen::<f64>()
}

/// Independent per-replica seed derived from a base seed (SplitMix64 finalizer).
pub fn replica_seed(base: u64, replica: u64) -> u64 {
    let mut z = base
        .wrapping_add(replica.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
