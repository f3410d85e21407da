//! The tapped quantum channel through which Eve acts.

use crate::qcore::PureState;

use super::SeededRng;

/// Protocol participants, for transcripts and message provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
    Charlie,
    Eve,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Charlie => "charlie",
            Party::Eve => "eve",
        }
    }
}

/// Mutable view of one in-flight qubit: a slot of `register`.
///
/// For the single-qubit payloads of Protocols 1 and 2 the register is the
/// payload itself; in Protocol 3 it is the shared multi-qubit round state.
/// Eve sees nothing beyond this view and the sequence length.
pub struct InFlight<'a> {
    pub register: &'a mut PureState,
    pub qubit: usize,
}

/// An ordered sequence of single-qubit payloads in flight.
#[derive(Debug, Clone)]
pub struct QubitMessage {
    origin: Party,
    qubits: Vec<PureState>,
    forged: Option<ForgedMetadata>,
}

/// Simulation-side record of a wholesale forgery, carried so the verifier's
/// bookkeeping can score detection the way the security analysis counts it
/// (a wrong guess counts as detected). Not visible to channel taps.
#[derive(Debug, Clone)]
pub struct ForgedMetadata {
    /// Per-block placement guesses for Protocol 1 (true = auth after decoy).
    pub placements: Vec<bool>,
    /// Per-position guessed bits: Protocol 1 auth-state selector
    /// (0 ↦ |0⟩, 1 ↦ |−⟩), Protocol 2 guessed key half.
    pub guessed_bits: Vec<u8>,
    /// The forger's substitute classical disclosure for decoy checking.
    pub disclosure: Option<crate::runtime::DecoyRecord>,
}

impl QubitMessage {
    pub fn new(origin: Party, qubits: Vec<PureState>) -> Self {
        assert!(qubits.iter().all(|q| q.num_qubits() == 1));
        QubitMessage {
            origin,
            qubits,
            forged: None,
        }
    }

    pub fn forged(origin: Party, qubits: Vec<PureState>, meta: ForgedMetadata) -> Self {
        let mut msg = Self::new(origin, qubits);
        msg.forged = Some(meta);
        msg
    }

    pub fn origin(&self) -> Party {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn qubits(&self) -> &[PureState] {
        &self.qubits
    }

    pub fn qubits_mut(&mut self) -> &mut [PureState] {
        &mut self.qubits
    }

    pub fn into_qubits(self) -> Vec<PureState> {
        self.qubits
    }

    pub fn forged_metadata(&self) -> Option<&ForgedMetadata> {
        self.forged.as_ref()
    }
}

/// A strategy invoked once per in-flight message. The honest tap is the
/// identity; Eve's taps may measure, replace, or entangle payloads with an
/// ancilla of her own.
pub trait ChannelTap {
    /// Full-message hook; the default taps each qubit in order.
    fn on_message(&mut self, msg: &mut QubitMessage, rng: &mut SeededRng) {
        for q in msg.qubits_mut() {
            self.on_qubit(
                InFlight {
                    register: q,
                    qubit: 0,
                },
                rng,
            );
        }
    }

    /// Per-qubit hook, also used for entangled slots of a shared register.
    fn on_qubit(&mut self, _flight: InFlight<'_>, _rng: &mut SeededRng) {}
}

/// Identity tap: the untampered channel.
#[derive(Debug, Default, Clone, Copy)]
pub struct HonestTap;

impl ChannelTap for HonestTap {}

/// Passes a message through a channel tap.
pub fn transmit(mut msg: QubitMessage, tap: &mut dyn ChannelTap, rng: &mut SeededRng) -> QubitMessage {
    tap.on_message(&mut msg, rng);
    msg
}

/// Passes one slot of a shared register through a channel tap.
pub fn transmit_entangled(
    register: &mut PureState,
    qubit: usize,
    tap: &mut dyn ChannelTap,
    rng: &mut SeededRng,
) {
    tap.on_qubit(InFlight { register, qubit }, rng);
}
