//! Deterministic RNG derivation.
//!
//! Every randomized component derives its generator from
//! `(master_seed, stream, index)` so that any replicate, student, or Monte
//! Carlo chunk can be recomputed in isolation and results do not depend on
//! scheduling or thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Logical sub-streams of the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    /// Label permutation for replicate `index`.
    Permutation = 1,
    /// Bootstrap resampling for replicate `index`.
    Bootstrap = 2,
    /// Chi-bar-square Monte Carlo, chunk `index`.
    ChiBar = 3,
    /// Cohort simulation, student `index`.
    Student = 4,
    /// Generic Monte Carlo verification draws, chunk `index`.
    McOracle = 5,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive an independent generator for `(master_seed, stream, index)`.
pub fn derive_rng(master_seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut state = master_seed
        ^ (stream as u64).wrapping_mul(0xa076_1d64_78bd_642f)
        ^ index.wrapping_mul(0xe703_7ed1_a0b4_28db);
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}
