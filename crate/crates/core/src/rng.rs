//! Seed derivation for independent, reproducible random substreams.
//!
//! Every stochastic step draws from its own ChaCha stream keyed by the master
//! seed plus a stream tag and indices. Substreams are mutually independent,
//! so enabling or disabling one consumer (e.g. the attack waveform) never
//! perturbs the draws of another (e.g. readout noise).

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_DARK_CURRENT: u64 = 0x01;
pub const STREAM_SHOT_NOISE: u64 = 0x02;
pub const STREAM_READ_NOISE: u64 = 0x03;
pub const STREAM_OFFSET: u64 = 0x04;
pub const STREAM_ENVELOPE: u64 = 0x05;
pub const STREAM_SCHEDULE: u64 = 0x06;
pub const STREAM_FRAME: u64 = 0x07;
pub const STREAM_SWEEP_POINT: u64 = 0x08;

/// Mix a master seed with stream tags into a new 64-bit seed (splitmix64).
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = master ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        state = mix(state.wrapping_add(p).wrapping_add(0x9e37_79b9_7f4a_7c15));
    }
    mix(state)
}

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// ChaCha stream for a derived seed.
pub fn stream(master: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, parts))
}

/// Per-point sweep seed: hash of (master, axis value bits, extra index).
pub fn sweep_point_seed(master: u64, axis_value: f64, extra: u64) -> u64 {
    derive_seed(master, &[STREAM_SWEEP_POINT, axis_value.to_bits(), extra])
}
