//! Eve's attack strategies: impersonation, measure-resend, fixed-state
//! forging, and the ancilla-entangling forgery against Protocol 3.
//!
//! Impersonation of Protocols 1 and 2 is scored the way the security
//! analysis counts it: Eve passes a position only when every guess behind
//! it (placement, parity, state) matches the key, which yields the
//! per-position survival of 1/4 and the detection probability
//! 1 − (1/4)^n. Protocol 3 needs no such convention; wrong Bell guesses
//! fail the XOR rule with certainty on their own.

use rand::Rng;

use crate::protocol1;
use crate::protocol2;
use crate::protocol3::{p3_round_with, CharlieChoice, HopTaps, XorVerdict};
use crate::qcore::{
    BellLabel, ComplexAmp, MeasBasis, PauliLabel, PureState, QcoreError, StateLabel, TOL,
};
use crate::runtime::{
    AuthKey, ChannelTap, DecoyRecord, ForgedMetadata, HonestTap, InFlight, Party, QubitMessage,
    SeededRng, Thresholds,
};

/// Protocol selector used across attacks and the experiment harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolId {
    P1,
    P2,
    P3,
}

impl ProtocolId {
    pub fn number(self) -> u8 {
        match self {
            ProtocolId::P1 => 1,
            ProtocolId::P2 => 2,
            ProtocolId::P3 => 3,
        }
    }
}

// ---------------------------------------------------------------------------
// Impersonation (no-message attack): Eve blocks the genuine sequence and
// substitutes forgeries built from fresh uniform guesses.
// ---------------------------------------------------------------------------

/// Protocol 1 impersonation tap: per block, a uniform placement guess, a
/// uniform authentication-state guess from {|0⟩, |−⟩}, and a uniform BB84
/// decoy with a matching forged disclosure.
#[derive(Debug, Clone)]
pub struct P1Impersonation {
    n: usize,
}

impl P1Impersonation {
    pub fn new(n: usize) -> Self {
        P1Impersonation { n }
    }
}

impl ChannelTap for P1Impersonation {
    fn on_message(&mut self, msg: &mut QubitMessage, rng: &mut SeededRng) {
        let mut qubits = Vec::with_capacity(2 * self.n);
        let mut placements = Vec::with_capacity(self.n);
        let mut guessed_bits = Vec::with_capacity(self.n);
        let mut decoy_states = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let auth_after = rng.gen_bool(0.5);
            let guess: u8 = rng.gen_range(0..2);
            let auth = PureState::prepare_basis_state(if guess == 0 {
                StateLabel::Zero
            } else {
                StateLabel::Minus
            });
            let decoy_label = StateLabel::all()[rng.gen_range(0..4usize)];
            let decoy = PureState::prepare_basis_state(decoy_label);
            if auth_after {
                qubits.push(decoy);
                qubits.push(auth);
            } else {
                qubits.push(auth);
                qubits.push(decoy);
            }
            placements.push(auth_after);
            guessed_bits.push(guess);
            decoy_states.push(decoy_label);
        }
        *msg = QubitMessage::forged(
            Party::Eve,
            qubits,
            ForgedMetadata {
                placements,
                guessed_bits,
                disclosure: Some(DecoyRecord {
                    states: decoy_states,
                }),
            },
        );
    }
}

/// Protocol 2 impersonation tap: a uniform guess of the whole key half,
/// encoded exactly like a legitimate sender would.
#[derive(Debug, Clone)]
pub struct P2Impersonation {
    n: usize,
}

impl P2Impersonation {
    pub fn new(n: usize) -> Self {
        P2Impersonation { n }
    }
}

impl ChannelTap for P2Impersonation {
    fn on_message(&mut self, msg: &mut QubitMessage, rng: &mut SeededRng) {
        let guessed: Vec<u8> = (0..2 * self.n).map(|_| rng.gen_range(0..2u8)).collect();
        let qubits = guessed
            .chunks_exact(2)
            .map(|b| PureState::prepare_basis_state(protocol2::encode_block(b[0], b[1])))
            .collect();
        *msg = QubitMessage::forged(
            Party::Eve,
            qubits,
            ForgedMetadata {
                placements: Vec::new(),
                guessed_bits: guessed,
                disclosure: None,
            },
        );
    }
}

/// One impersonation trial against a fresh random key: returns true when
/// the verifier detects Eve.
pub fn impersonation_trial(
    protocol: ProtocolId,
    n: usize,
    thresholds: Thresholds,
    rng: &mut SeededRng,
) -> bool {
    match protocol {
        ProtocolId::P1 => {
            let key = AuthKey::random(2 * n.max(1), rng).expect("even length");
            let mut tap = P1Impersonation::new(n);
            if n == 0 {
                return false;
            }
            let mut transcript = crate::runtime::Transcript::new();
            let outcome = protocol1::p1_directed(
                &key,
                Party::Alice,
                &mut tap,
                thresholds,
                rng,
                &mut transcript,
                "1.2",
            )
            .expect("valid key");
            outcome.verdict == crate::runtime::Verdict::Reject
        }
        ProtocolId::P2 => {
            if n == 0 {
                return false;
            }
            let half: Vec<u8> = (0..2 * n).map(|_| rng.gen_range(0..2u8)).collect();
            let msg = protocol2::p2_encode(&half).expect("even length");
            let mut tap = P2Impersonation::new(n);
            let msg = crate::runtime::transmit(msg, &mut tap, rng);
            let outcome = protocol2::p2_decode(msg, &half, thresholds, rng);
            outcome.verdict == crate::runtime::Verdict::Reject
        }
        ProtocolId::P3 => {
            if n == 0 {
                return false;
            }
            let key = AuthKey::random(2 * n, rng).expect("even length");
            let mut honest = [HonestTap; 4];
            (0..n).any(|i| {
                let (b1, b2) = key.pair(i);
                let true_label = BellLabel::from_bits(b1, b2);
                let true_pauli = PauliLabel::from_bits(b1, b2);
                let (guess_label, guess_pauli) = crate::protocol3::forged_alice_inputs(rng);
                let mut taps = HopTaps::honest(&mut honest);
                let outcome = p3_round_with(
                    guess_label,
                    guess_pauli,
                    true_label,
                    true_pauli,
                    CharlieChoice::random(rng),
                    0,
                    &mut taps,
                    rng,
                );
                !outcome.verdict.pass
            })
        }
    }
}

// ---------------------------------------------------------------------------
// Measure-resend: Eve measures each travelling qubit in a uniformly chosen
// basis and forwards the collapsed state.
// ---------------------------------------------------------------------------

/// Measure-resend tap. `fraction` is the share of qubits Eve touches
/// (default 1); outcomes she sees are recorded for information analysis.
#[derive(Debug, Clone)]
pub struct MeasureResend {
    fraction: f64,
    pub records: Vec<StateLabel>,
}

impl MeasureResend {
    pub fn new() -> Self {
        Self::with_fraction(1.0)
    }

    pub fn with_fraction(fraction: f64) -> Self {
        assert!(
            fraction > 0.0 && fraction <= 1.0,
            "fraction must lie in (0, 1]"
        );
        MeasureResend {
            fraction,
            records: Vec::new(),
        }
    }
}

impl Default for MeasureResend {
    fn default() -> Self {
        Self::new()
    }
}

impl ChannelTap for MeasureResend {
    fn on_qubit(&mut self, flight: InFlight<'_>, rng: &mut SeededRng) {
        if self.fraction < 1.0 && !rng.gen_bool(self.fraction) {
            return;
        }
        let basis = if rng.gen_bool(0.5) {
            MeasBasis::Z
        } else {
            MeasBasis::X
        };
        let outcome = flight
            .register
            .measure(flight.qubit, basis, rng)
            .expect("tapped qubit is in range");
        self.records.push(outcome);
    }
}

// ---------------------------------------------------------------------------
// Forged fresh qubits (Protocol 1, impersonated fraudulent attack).
// ---------------------------------------------------------------------------

/// What the forger substitutes for each travelling qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForgePolicy {
    Fixed(StateLabel),
    UniformBb84,
}

/// Replaces every single-qubit payload with a fresh state drawn from the
/// policy. Entangled slots are left alone; the attack targets the
/// prepare-and-send protocols.
#[derive(Debug, Clone)]
pub struct ForgeNewQubits {
    policy: ForgePolicy,
}

impl ForgeNewQubits {
    pub fn new(policy: ForgePolicy) -> Self {
        ForgeNewQubits { policy }
    }
}

impl ChannelTap for ForgeNewQubits {
    fn on_qubit(&mut self, flight: InFlight<'_>, rng: &mut SeededRng) {
        if flight.register.num_qubits() != 1 {
            return;
        }
        let label = match self.policy {
            ForgePolicy::Fixed(label) => label,
            ForgePolicy::UniformBb84 => StateLabel::all()[rng.gen_range(0..4usize)],
        };
        *flight.register = PureState::prepare_basis_state(label);
    }
}

// ---------------------------------------------------------------------------
// Ancilla forgery against Protocol 3 (impersonated fraudulent attack).
// ---------------------------------------------------------------------------

/// Unbiased completion for the unspecified |0⟩-branch: equal weight on all
/// four output kets, which makes the simulated pass rate agree with the
/// closed form 1/4(|b0|²+|c0|²) + 1/8.
pub const UNBIASED_BRANCH: [ComplexAmp; 4] = [
    ComplexAmp::new(0.5, 0.0),
    ComplexAmp::new(0.5, 0.0),
    ComplexAmp::new(0.5, 0.0),
    ComplexAmp::new(0.5, 0.0),
];

/// Eve's entangling forgery: impersonating Alice in the key-10 round, she
/// prepares Φ⁺ on particles (1,2), couples the travelling particle 2 to a
/// private ancilla through the two-branch map
///
/// ```text
/// |1⟩ ↦ a0|10⟩ + b0|11⟩ + c0|00⟩ + d0|01⟩      (particle 2, ancilla)
/// |0⟩ ↦ a1|10⟩ + b1|11⟩ + c1|00⟩ + d1|01⟩
/// ```
///
/// and runs the round to completion. Lacking particle 1's phase reference,
/// she reads her ancilla and the returned particle 4 in the computational
/// basis, reports the amplitude bit they imply and a coin flip for the
/// phase bit.
#[derive(Debug, Clone)]
pub struct AncillaForgeAttack {
    branch0: [ComplexAmp; 4],
    branch1: [ComplexAmp; 4],
}

/// Branch order used in the coefficient tuples: (a, b, c, d) multiply
/// |10⟩, |11⟩, |00⟩, |01⟩ in that order.
fn branch_images(branch: &[ComplexAmp; 4]) -> [ComplexAmp; 4] {
    // extend_qubit wants output index order |00⟩,|01⟩,|10⟩,|11⟩.
    [branch[2], branch[3], branch[0], branch[1]]
}

fn branch_norm_sqr(branch: &[ComplexAmp; 4]) -> f64 {
    branch.iter().map(|c| c.norm_sqr()).sum()
}

impl AncillaForgeAttack {
    /// Validates per-branch normalization; a missing |0⟩-branch defaults to
    /// the unbiased completion.
    pub fn new(
        branch0: [ComplexAmp; 4],
        branch1: Option<[ComplexAmp; 4]>,
    ) -> Result<Self, QcoreError> {
        let branch1 = branch1.unwrap_or(UNBIASED_BRANCH);
        for branch in [&branch0, &branch1] {
            let norm_sqr = branch_norm_sqr(branch);
            if (norm_sqr - 1.0).abs() > TOL {
                return Err(QcoreError::NotNormalized { norm_sqr });
            }
        }
        Ok(AncillaForgeAttack { branch0, branch1 })
    }

    pub fn branch0(&self) -> &[ComplexAmp; 4] {
        &self.branch0
    }

    pub fn branch1(&self) -> &[ComplexAmp; 4] {
        &self.branch1
    }

    /// Exact pass probability of the simulated scenario,
    /// 1/4(|b0|²+|c0|²) + 1/4(|b1|²+|c1|²). With the unbiased default
    /// branch this is the closed form 1/4(|b0|²+|c0|²) + 1/8.
    pub fn expected_pass_probability(&self) -> f64 {
        0.25 * (self.branch0[1].norm_sqr() + self.branch0[2].norm_sqr())
            + 0.25 * (self.branch1[1].norm_sqr() + self.branch1[2].norm_sqr())
    }

    /// Runs one forged round against the key-10 scenario with Charlie's
    /// choices drawn fresh. Returns true when Charlie's XOR check passes.
    pub fn run_round(&self, rng: &mut SeededRng) -> bool {
        self.run_round_with(CharlieChoice::random(rng), rng)
    }

    /// Same with fixed Charlie choices (the published example uses control
    /// |−⟩ and target particle 2).
    pub fn run_round_with(&self, choice: CharlieChoice, rng: &mut SeededRng) -> bool {
        let true_label = BellLabel::PSI_PLUS;
        let true_pauli = PauliLabel::I_SIGMA_Y;

        let eve_pair = PureState::prepare_bell(BellLabel::PHI_PLUS);
        let bob_pair = PureState::prepare_bell(true_label);
        let control = PureState::prepare_basis_state(choice.control);
        let four = PureState::tensor(&eve_pair, &bob_pair).expect("4 qubits");
        let five = PureState::tensor(&four, &control).expect("5 qubits");

        // Ancilla joins as qubit 5; particles keep qubits 0..4.
        let images = [branch_images(&self.branch1), branch_images(&self.branch0)];
        let mut register = five.extend_qubit(1, &images).expect("6 qubits fit");

        register
            .apply_cnot(4, choice.target.qubit())
            .expect("distinct in-range qubits");
        register.apply_pauli(2, true_pauli).expect("in range");

        // Bob and Charlie measure honestly.
        let r23 = register.bell_measure(1, 2, rng).expect("distinct qubits");
        let r5 = match register.measure(4, MeasBasis::Z, rng).expect("in range") {
            StateLabel::Zero => 0u8,
            _ => 1,
        };

        // Eve reads ancilla and particle 4 in Z and fabricates her report.
        let xe = match register.measure(5, MeasBasis::Z, rng).expect("in range") {
            StateLabel::Zero => 0u8,
            _ => 1,
        };
        let x4 = match register.measure(3, MeasBasis::Z, rng).expect("in range") {
            StateLabel::Zero => 0u8,
            _ => 1,
        };
        let r14 = BellLabel::from_bits(xe ^ x4, rng.gen_range(0..2u8));

        XorVerdict::evaluate(r14, r23, r5).pass
    }

    /// Monte Carlo pass rate over `rounds` forged rounds.
    pub fn pass_rate(&self, rounds: usize, rng: &mut SeededRng) -> f64 {
        let mut passes = 0usize;
        for _ in 0..rounds {
            if self.run_round(rng) {
                passes += 1;
            }
        }
        passes as f64 / rounds as f64
    }
}

/// Spec'd constructor form: builds the attack as a boxed strategy.
pub fn ancilla_forge_p3(
    branch0: [ComplexAmp; 4],
    branch1: Option<[ComplexAmp; 4]>,
) -> Result<AncillaForgeAttack, QcoreError> {
    AncillaForgeAttack::new(branch0, branch1)
}

/// Measure-resend constructor in the spec's shape.
pub fn measure_resend() -> MeasureResend {
    MeasureResend::new()
}

/// Fresh-qubit forging constructor in the spec's shape.
pub fn forge_p1(policy: ForgePolicy) -> ForgeNewQubits {
    ForgeNewQubits::new(policy)
}
