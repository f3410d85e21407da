//! Deterministic randomness with counter-based substreams.
//!
//! Each (seed, stream) pair yields an independent ChaCha12 stream whose key
//! is derived by running SplitMix64 over the pair, so that neighbouring
//! trial indices avalanche into unrelated keys. Identical
//! (seed, stream, draw index) triples produce identical draws on every
//! platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    stream: u64,
    inner: ChaCha12Rng,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent substream `stream` of the generator seeded with `seed`.
    pub fn substream(seed: u64, stream: u64) -> Self {
        let mut state = seed;
        // Absorb the stream id between two mixing rounds so that both
        // coordinates avalanche into the full 256-bit key.
        let mut key = [0u8; 32];
        let a = splitmix64(&mut state);
        state ^= stream.wrapping_mul(0xd605_bbb5_8c8a_bc2d) | 1;
        let b = splitmix64(&mut state);
        let c = splitmix64(&mut state);
        let d = splitmix64(&mut state);
        key[0..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..32].copy_from_slice(&d.to_le_bytes());
        SeededRng {
            seed,
            stream,
            inner: ChaCha12Rng::from_seed(key),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// Substream for one Monte Carlo trial.
pub fn rng_substream(seed: u64, trial: u64) -> SeededRng {
    SeededRng::substream(seed, trial)
}
