//! Shared protocol machinery: authentication keys, decoy lifecycle, the
//! tapped quantum channel, transcripts, per-round reports, and deterministic
//! randomness.

mod channel;
mod decoy;
mod key;
mod rng;
mod transcript;

pub use channel::{
    transmit, transmit_entangled, ChannelTap, ForgedMetadata, HonestTap, InFlight, Party,
    QubitMessage,
};
pub use decoy::{
    check_bb84_decoys, check_decoys, contradicts, make_bb84_decoys, make_decoy_sequence,
    DecoyRecord,
};
pub use key::{AuthKey, RuntimeError};
pub use rng::{rng_substream, SeededRng};
pub use transcript::{Event, Transcript};

/// Round verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }
}

/// Acceptance thresholds. The channel is noiseless, so any disturbance is
/// attributable to Eve and both default to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub qber: f64,
    pub auth_mismatch: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            qber: 0.0,
            auth_mismatch: 0.0,
        }
    }
}

/// Per-run verdict, error rates and transcript; the unit of Monte Carlo
/// aggregation.
#[derive(Debug, Clone)]
pub struct ProtocolReport {
    pub verdict: Verdict,
    pub qber: f64,
    pub auth_mismatch_rate: f64,
    pub transcript: Transcript,
    pub rounds: usize,
}

impl ProtocolReport {
    pub fn detected_eve(&self) -> bool {
        self.verdict == Verdict::Reject
    }
}
