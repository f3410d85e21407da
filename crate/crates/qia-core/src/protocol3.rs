//! Protocol 3: three-party identity authentication via Bell states, a
//! semi-honest verifier, a CNOT with |±⟩ control, and entanglement
//! swapping.
//!
//! One round consumes one two-bit key block. Alice and Bob each prepare the
//! Bell state named by the block on particle pairs (1,2) and (3,4); the
//! travelling particles 2 and 4 go to Charlie alongside BB84 decoys.
//! Charlie prepares particle 5 in |+⟩ or |−⟩, applies a CNOT with particle
//! 5 as control onto particle 2 or 4 (both choices his own uniform coins),
//! and returns particle 2 to Bob and particle 4 to Alice, again with
//! decoys. Alice and Bob apply the key's Pauli operation to particles 1 and
//! 3, Bell-measure the pairs (1,4) and (2,3) and report the two-bit codes;
//! Charlie measures particle 5 and accepts when
//! `r14 ⊕ r23 = 00` under outcome 0 and `= 10` under outcome 1.
//!
//! Particles 1–5 occupy register qubits 0–4.

use rand::Rng;

use crate::qcore::{
    inner, BellLabel, ComplexAmp, MeasBasis, PauliLabel, PureState, StateLabel,
};
use crate::runtime::{
    check_bb84_decoys, make_bb84_decoys, transmit_entangled, AuthKey, ChannelTap, Party,
    ProtocolReport, RuntimeError, SeededRng, Thresholds, Transcript, Verdict,
};

/// Which travelling particle Charlie's CNOT targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnotTarget {
    Particle2,
    Particle4,
}

impl CnotTarget {
    pub fn qubit(self) -> usize {
        match self {
            CnotTarget::Particle2 => 1,
            CnotTarget::Particle4 => 3,
        }
    }
}

/// Charlie's per-round choices: the control state and the CNOT target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharlieChoice {
    pub control: StateLabel,
    pub target: CnotTarget,
}

impl CharlieChoice {
    pub fn random(rng: &mut SeededRng) -> Self {
        CharlieChoice {
            control: if rng.gen_bool(0.5) {
                StateLabel::Plus
            } else {
                StateLabel::Minus
            },
            target: if rng.gen_bool(0.5) {
                CnotTarget::Particle2
            } else {
                CnotTarget::Particle4
            },
        }
    }
}

/// Charlie's acceptance data for one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct XorVerdict {
    pub r5: u8,
    pub xor: u8,
    pub pass: bool,
}

impl XorVerdict {
    pub fn evaluate(r14: BellLabel, r23: BellLabel, r5: u8) -> Self {
        let xor = r14.xor(r23);
        let pass = (r5 == 0 && xor == 0b00) || (r5 == 1 && xor == 0b10);
        XorVerdict { r5, xor, pass }
    }
}

/// Full measurement record of one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundOutcome {
    pub r14: BellLabel,
    pub r23: BellLabel,
    pub verdict: XorVerdict,
    /// A decoy check failed on some hop; the round is void and rejected.
    pub decoy_alarm: bool,
}

/// Channel taps for the four quantum hops of one round.
pub struct HopTaps<'a> {
    pub alice_to_charlie: &'a mut dyn ChannelTap,
    pub bob_to_charlie: &'a mut dyn ChannelTap,
    pub charlie_to_bob: &'a mut dyn ChannelTap,
    pub charlie_to_alice: &'a mut dyn ChannelTap,
}

impl<'a> HopTaps<'a> {
    pub fn honest(tap: &'a mut [crate::runtime::HonestTap; 4]) -> Self {
        let [a, b, c, d] = tap;
        HopTaps {
            alice_to_charlie: a,
            bob_to_charlie: b,
            charlie_to_bob: c,
            charlie_to_alice: d,
        }
    }
}

/// Prepares the five-particle register for one round: Alice's Bell pair on
/// particles (1,2), Bob's on (3,4), Charlie's control on particle 5.
pub fn round_register(
    alice_label: BellLabel,
    bob_label: BellLabel,
    control: StateLabel,
) -> PureState {
    let a = PureState::prepare_bell(alice_label);
    let b = PureState::prepare_bell(bob_label);
    let c = PureState::prepare_basis_state(control);
    let ab = PureState::tensor(&a, &b).expect("4 qubits fit");
    PureState::tensor(&ab, &c).expect("5 qubits fit")
}

/// Passes one travelling particle plus fresh BB84 decoys through a tap,
/// then checks the decoys. Returns true when the decoy check trips.
fn tapped_hop(
    register: &mut PureState,
    qubit: usize,
    decoys_per_hop: usize,
    tap: &mut dyn ChannelTap,
    rng: &mut SeededRng,
) -> bool {
    let (mut decoys, record) = make_bb84_decoys(decoys_per_hop, rng);
    // The payload slot sits at a uniform position among the decoys.
    let payload_pos = rng.gen_range(0..=decoys.len());
    let mut next_decoy = 0usize;
    for slot in 0..=decoys.len() {
        if slot == payload_pos {
            transmit_entangled(register, qubit, tap, rng);
        } else {
            transmit_entangled(&mut decoys[next_decoy], 0, tap, rng);
            next_decoy += 1;
        }
    }
    match check_bb84_decoys(decoys, &record, rng) {
        Ok(mismatches) => mismatches > 0,
        Err(_) => true,
    }
}

/// Executes one round with explicit per-party inputs. Honest operation has
/// `alice_label == bob_label` and both Paulis equal to the key's.
#[allow(clippy::too_many_arguments)]
pub fn p3_round_with(
    alice_label: BellLabel,
    alice_pauli: PauliLabel,
    bob_label: BellLabel,
    bob_pauli: PauliLabel,
    choice: CharlieChoice,
    decoys_per_hop: usize,
    taps: &mut HopTaps<'_>,
    rng: &mut SeededRng,
) -> RoundOutcome {
    let mut register = round_register(alice_label, bob_label, choice.control);

    // Steps 3.2-3.3: particles 2 and 4 travel to Charlie with decoys.
    let mut alarm = tapped_hop(&mut register, 1, decoys_per_hop, taps.alice_to_charlie, rng);
    alarm |= tapped_hop(&mut register, 3, decoys_per_hop, taps.bob_to_charlie, rng);

    // Step 3.3: CNOT, particle 5 controlling the chosen target.
    register
        .apply_cnot(4, choice.target.qubit())
        .expect("distinct in-range qubits");

    // Step 3.4: particle 2 returns to Bob, particle 4 to Alice.
    alarm |= tapped_hop(&mut register, 1, decoys_per_hop, taps.charlie_to_bob, rng);
    alarm |= tapped_hop(&mut register, 3, decoys_per_hop, taps.charlie_to_alice, rng);

    // Step 3.5: key Paulis on particles 1 and 3, then the Bell measurements
    // and Charlie's computational-basis measurement.
    register.apply_pauli(0, alice_pauli).expect("in range");
    register.apply_pauli(2, bob_pauli).expect("in range");
    let r14 = register.bell_measure(0, 3, rng).expect("distinct qubits");
    let r23 = register.bell_measure(1, 2, rng).expect("distinct qubits");
    let r5 = match register.measure(4, MeasBasis::Z, rng).expect("in range") {
        StateLabel::Zero => 0,
        _ => 1,
    };

    let verdict = XorVerdict::evaluate(r14, r23, r5);
    RoundOutcome {
        r14,
        r23,
        verdict,
        decoy_alarm: alarm,
    }
}

/// One honest round for a two-bit key block (Steps 3.1–3.6).
pub fn p3_round(
    key_bits: (u8, u8),
    choice: CharlieChoice,
    taps: &mut HopTaps<'_>,
    rng: &mut SeededRng,
) -> XorVerdict {
    let label = BellLabel::from_bits(key_bits.0, key_bits.1);
    let pauli = PauliLabel::from_bits(key_bits.0, key_bits.1);
    let outcome = p3_round_with(label, pauli, label, pauli, choice, 2, taps, rng);
    if outcome.decoy_alarm {
        XorVerdict {
            pass: false,
            ..outcome.verdict
        }
    } else {
        outcome.verdict
    }
}

/// Runs n rounds over a 2n-bit key (Step 3.7): accept only when every round
/// passes the XOR rule and every decoy check is clean.
pub fn p3_protocol(
    key: &AuthKey,
    taps: &mut HopTaps<'_>,
    thresholds: Thresholds,
    rng: &mut SeededRng,
) -> Result<ProtocolReport, RuntimeError> {
    let n = key.pairs();
    let mut transcript = Transcript::new();
    let mut failures = 0usize;
    let mut alarms = 0usize;
    for i in 0..n {
        let choice = CharlieChoice::random(rng);
        let label = BellLabel::from_bits(key.pair(i).0, key.pair(i).1);
        let pauli = PauliLabel::from_bits(key.pair(i).0, key.pair(i).1);
        let outcome = p3_round_with(label, pauli, label, pauli, choice, 2, taps, rng);
        transcript.record(
            "3.5",
            Party::Alice,
            "bell_result",
            &[outcome.r14.code()],
        );
        transcript.record("3.5", Party::Bob, "bell_result", &[outcome.r23.code()]);
        transcript.record(
            "3.6",
            Party::Charlie,
            "xor_check",
            &[
                outcome.verdict.r5,
                outcome.verdict.xor,
                u8::from(outcome.verdict.pass),
            ],
        );
        if !outcome.verdict.pass {
            failures += 1;
        }
        if outcome.decoy_alarm {
            alarms += 1;
        }
    }
    let failure_rate = if n == 0 {
        0.0
    } else {
        failures as f64 / n as f64
    };
    let alarm_rate = if n == 0 { 0.0 } else { alarms as f64 / n as f64 };
    let verdict = if failure_rate <= thresholds.auth_mismatch && alarm_rate <= thresholds.qber {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    transcript.record("3.7", Party::Charlie, "announce", &[u8::from(verdict == Verdict::Reject)]);
    Ok(ProtocolReport {
        verdict,
        qber: alarm_rate,
        auth_mismatch_rate: failure_rate,
        transcript,
        rounds: n,
    })
}

/// Basis vector |β⟩ on the particle pair (1,4) ⊗ |β'⟩ on (2,3) ⊗ |z⟩ on
/// particle 5, as a 5-qubit register state.
pub fn swap_basis_vector(r14: BellLabel, r23: BellLabel, z: u8) -> PureState {
    let b14 = PureState::prepare_bell(r14);
    let b23 = PureState::prepare_bell(r23);
    let mut amps = vec![ComplexAmp::new(0.0, 0.0); 32];
    for (i14, a14) in b14.amps().iter().enumerate() {
        if a14.norm_sqr() == 0.0 {
            continue;
        }
        let (x1, x4) = (i14 >> 1, i14 & 1);
        for (i23, a23) in b23.amps().iter().enumerate() {
            if a23.norm_sqr() == 0.0 {
                continue;
            }
            let (x2, x3) = (i23 >> 1, i23 & 1);
            let idx = (x1 << 4) | (x2 << 3) | (x3 << 2) | (x4 << 1) | usize::from(z & 1);
            amps[idx] = a14 * a23;
        }
    }
    PureState::from_amps(amps).expect("orthonormal basis vector")
}

/// Exact joint distribution of (r14, r23, r5) for a round state, by
/// projection onto the complete 32-element swap basis.
pub fn outcome_distribution(state: &PureState) -> Vec<((BellLabel, BellLabel, u8), f64)> {
    assert_eq!(state.num_qubits(), 5);
    let mut out = Vec::new();
    for r14 in BellLabel::all() {
        for r23 in BellLabel::all() {
            for z in 0..=1u8 {
                let basis = swap_basis_vector(r14, r23, z);
                let p = inner(basis.amps(), state.amps()).norm_sqr();
                if p > 1e-12 {
                    out.push(((r14, r23, z), p));
                }
            }
        }
    }
    out
}

/// The round state right after Charlie's CNOT and the key Paulis, before any
/// measurement (the entanglement-swapping stage).
pub fn swap_stage_state(
    alice_label: BellLabel,
    alice_pauli: PauliLabel,
    bob_label: BellLabel,
    bob_pauli: PauliLabel,
    choice: CharlieChoice,
) -> PureState {
    let mut register = round_register(alice_label, bob_label, choice.control);
    register
        .apply_cnot(4, choice.target.qubit())
        .expect("distinct in-range qubits");
    register.apply_pauli(0, alice_pauli).expect("in range");
    register.apply_pauli(2, bob_pauli).expect("in range");
    register
}

/// The sixteen signed coefficients of the rearranged five-particle state of
/// the key-10, control-|−⟩, target-2 round, in units of 1/(2√2): the
/// |0⟩₅ branch pairs equal Bell labels with signs (+,+,−,−), the |1⟩₅
/// branch pairs labels differing in the amplitude bit with signs
/// (−,+,+,−).
pub fn expected_swap_coefficients() -> Vec<((BellLabel, BellLabel, u8), f64)> {
    use BellLabel as B;
    vec![
        ((B::PHI_PLUS, B::PHI_PLUS, 0), 1.0),
        ((B::PHI_MINUS, B::PHI_MINUS, 0), 1.0),
        ((B::PSI_PLUS, B::PSI_PLUS, 0), -1.0),
        ((B::PSI_MINUS, B::PSI_MINUS, 0), -1.0),
        ((B::PHI_PLUS, B::PSI_PLUS, 1), -1.0),
        ((B::PHI_MINUS, B::PSI_MINUS, 1), 1.0),
        ((B::PSI_PLUS, B::PHI_PLUS, 1), 1.0),
        ((B::PSI_MINUS, B::PHI_MINUS, 1), -1.0),
    ]
}

/// Confirms, coefficient by coefficient, that the key-10 / control-|−⟩ /
/// target-2 round state equals its published Bell⊗Bell⊗Z expansion: the
/// eight listed coefficients at ±1/(2√2) and the other twenty-four at zero,
/// all within 1e-9.
pub fn verify_eq5() -> bool {
    verify_swap_expansion_against(&expected_swap_coefficients())
}

/// Comparison core of [`verify_eq5`], exposed so a tampered expectation
/// table can be shown to fail.
pub fn verify_swap_expansion_against(expected: &[((BellLabel, BellLabel, u8), f64)]) -> bool {
    let state = swap_stage_state(
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        CharlieChoice {
            control: StateLabel::Minus,
            target: CnotTarget::Particle2,
        },
    );
    let unit = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    for r14 in BellLabel::all() {
        for r23 in BellLabel::all() {
            for z in 0..=1u8 {
                let want = expected
                    .iter()
                    .find(|(k, _)| *k == (r14, r23, z))
                    .map_or(0.0, |(_, sign)| sign * unit);
                let got = inner(
                    swap_basis_vector(r14, r23, z).amps(),
                    state.amps(),
                );
                if (got - ComplexAmp::new(want, 0.0)).norm() > 1e-9 {
                    return false;
                }
            }
        }
    }
    true
}

/// Forged-message constructor used by the impersonation model: Eve sends
/// her own Bell pair built from a uniform label guess.
pub fn forged_alice_inputs(rng: &mut SeededRng) -> (BellLabel, PauliLabel) {
    let code = rng.gen_range(0..4u8);
    (BellLabel::from_code(code), PauliLabel::from_code(code))
}
