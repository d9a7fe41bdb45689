//! Deterministic stream derivation for parallel Monte Carlo.
//!
//! Each (replicate, copy) pair owns a disjoint ChaCha8 stream derived
//! from the master seed. The derivation never touches global state, so
//! any copy's stream can be reconstructed in isolation; this is what
//! makes panels bit-reproducible under work stealing and lets tests pick
//! apart individual copy contributions.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// 64-bit finalizer from splitmix64. Full-avalanche, invertible.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Factory deriving independent random streams from one master seed.
#[derive(Clone, Copy, Debug)]
pub struct Streams {
    master: u64,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Self { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// Stream for one copy inside one replicate.
    ///
    /// The 256-bit ChaCha key is expanded from (master, replicate) with
    /// splitmix64, and the copy index selects the ChaCha stream number,
    /// which guarantees disjoint keystreams across copies of a replicate.
    pub fn copy_rng(&self, replicate: u64, copy: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        let mut state = mix64(self.master ^ mix64(replicate));
        for chunk in key.chunks_exact_mut(8) {
            state = mix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(copy);
        rng
    }

    /// Stream for per-replicate draws that are not tied to a copy
    /// (e.g. fixed coefficient vectors shared by all replicates).
    pub fn replicate_rng(&self, replicate: u64) -> ChaCha8Rng {
        self.copy_rng(replicate, u64::MAX)
    }
}
