//! Pre-shared classical authentication keys.

use rand::Rng;

use super::SeededRng;

/// Errors raised by the shared protocol machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RuntimeError {
    #[error("key of {len} bits violates the protocol length constraint ({requirement})")]
    BadKeyLength { len: usize, requirement: &'static str },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// The pre-shared classical bit string driving all encoding decisions.
///
/// Protocols 1 and 3 consume keys of length 2n, Protocol 2 of length 4n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthKey {
    bits: Vec<u8>,
}

impl AuthKey {
    pub fn new(bits: Vec<u8>) -> Result<Self, RuntimeError> {
        if bits.is_empty() || !bits.len().is_multiple_of(2) {
            return Err(RuntimeError::BadKeyLength {
                len: bits.len(),
                requirement: "nonzero even length",
            });
        }
        assert!(bits.iter().all(|&b| b <= 1), "key bits must be 0 or 1");
        Ok(AuthKey { bits })
    }

    /// Uniformly random key of `len` bits (even, nonzero).
    pub fn random(len: usize, rng: &mut SeededRng) -> Result<Self, RuntimeError> {
        let bits = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
        Self::new(bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Number of two-bit blocks.
    pub fn pairs(&self) -> usize {
        self.bits.len() / 2
    }

    /// The i-th (zero-based) block (k_{2i-1}, k_{2i}) in the one-based
    /// numbering of the protocol tables.
    pub fn pair(&self, i: usize) -> (u8, u8) {
        (self.bits[2 * i], self.bits[2 * i + 1])
    }

    /// Parity k_{2i-1} ⊕ k_{2i} of block i.
    pub fn parity(&self, i: usize) -> u8 {
        let (a, b) = self.pair(i);
        a ^ b
    }

    /// Second bit k_{2i} of block i, the decoy-basis selector.
    pub fn even_bit(&self, i: usize) -> u8 {
        self.bits[2 * i + 1]
    }

    /// First and second halves, as used by Protocol 2.
    pub fn halves(&self) -> Result<(&[u8], &[u8]), RuntimeError> {
        if !self.bits.len().is_multiple_of(4) {
            return Err(RuntimeError::BadKeyLength {
                len: self.bits.len(),
                requirement: "multiple of 4",
            });
        }
        Ok(self.bits.split_at(self.bits.len() / 2))
    }

    /// All keys of a given (small) even length, for exhaustive checks.
    pub fn enumerate(len: usize) -> Vec<AuthKey> {
        assert!((2..=16).contains(&len) && len.is_multiple_of(2));
        (0..1usize << len)
            .map(|v| {
                let bits = (0..len).map(|i| ((v >> (len - 1 - i)) & 1) as u8).collect();
                AuthKey { bits }
            })
            .collect()
    }
}
