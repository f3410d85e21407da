//! Protocol 1: QSDC-inspired mutual identity authentication with
//! interleaved decoy and authentication qubits.
//!
//! Per two-bit key block i, the sender prepares one decoy qubit (basis from
//! k_{2i}, member uniform) and one authentication qubit (|0⟩ when
//! k_{2i-1}⊕k_{2i} = 0, else |−⟩), placing the authentication qubit after
//! the decoy exactly when the parity is 0. The receiver recomputes the
//! layout from the shared key, measures decoys against the disclosed
//! records and authentication qubits against the fixed expectations, and
//! accepts when both error rates stay under threshold.

use crate::qcore::{MeasBasis, PureState, StateLabel};
use crate::runtime::{
    contradicts, transmit, ChannelTap, DecoyRecord, Party, ProtocolReport, QubitMessage,
    RuntimeError, SeededRng, Thresholds, Transcript, Verdict,
};

/// Where the authentication qubit of block i sits relative to its decoy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Placement {
    AuthAfterDecoy,
    AuthBeforeDecoy,
}

/// Placement rule of Step 1.2: auth-after exactly when the block parity is 0.
pub fn placement(parity: u8) -> Placement {
    if parity == 0 {
        Placement::AuthAfterDecoy
    } else {
        Placement::AuthBeforeDecoy
    }
}

/// Expected authentication state for a block parity (Table 2).
pub fn auth_state(parity: u8) -> StateLabel {
    if parity == 0 {
        StateLabel::Zero
    } else {
        StateLabel::Minus
    }
}

/// Outcome of decoding one directed transmission.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeOutcome {
    pub qber: f64,
    pub auth_mismatch_rate: f64,
    pub verdict: Verdict,
}

/// Builds the enlarged 2n-qubit sequence of Steps 1.1–1.2 plus the private
/// decoy record.
pub fn p1_encode(
    key: &crate::runtime::AuthKey,
    rng: &mut SeededRng,
) -> Result<(QubitMessage, DecoyRecord), RuntimeError> {
    let n = key.pairs();
    if n == 0 {
        return Err(RuntimeError::BadKeyLength {
            len: key.len(),
            requirement: "at least one block",
        });
    }
    let (decoys, record) = crate::runtime::make_decoy_sequence(key, n, rng)?;
    let mut qubits = Vec::with_capacity(2 * n);
    for (i, decoy) in decoys.into_iter().enumerate() {
        let auth = PureState::prepare_basis_state(auth_state(key.parity(i)));
        match placement(key.parity(i)) {
            Placement::AuthAfterDecoy => {
                qubits.push(decoy);
                qubits.push(auth);
            }
            Placement::AuthBeforeDecoy => {
                qubits.push(auth);
                qubits.push(decoy);
            }
        }
    }
    Ok((QubitMessage::new(Party::Alice, qubits), record))
}

/// De-interleaves, measures and scores a received sequence (Step 1.3).
///
/// A wholesale forgery carries the forger's guesses; per the security
/// accounting, any wrong placement or wrong authentication-state guess is
/// scored as detection, on top of the physical checks.
pub fn p1_decode(
    msg: QubitMessage,
    key: &crate::runtime::AuthKey,
    record: &DecoyRecord,
    thresholds: Thresholds,
    rng: &mut SeededRng,
) -> DecodeOutcome {
    let n = key.pairs();
    if msg.len() != 2 * n || record.states.len() != n {
        return DecodeOutcome {
            qber: 1.0,
            auth_mismatch_rate: 1.0,
            verdict: Verdict::Reject,
        };
    }
    let forged_detected = msg.forged_metadata().map(|meta| {
        (0..n).any(|i| {
            let placement_wrong = meta
                .placements
                .get(i)
                .is_none_or(|&after| after != (key.parity(i) == 0));
            let state_wrong = meta.guessed_bits.get(i).is_none_or(|&b| b != key.parity(i));
            placement_wrong || state_wrong
        })
    });
    // A forged message brings its own disclosure for the decoy comparison.
    let forged_record = msg
        .forged_metadata()
        .and_then(|meta| meta.disclosure.clone());
    let record = forged_record.as_ref().unwrap_or(record);

    let mut qubits = msg.into_qubits();
    let mut decoy_mismatches = 0usize;
    let mut auth_mismatches = 0usize;
    for i in 0..n {
        let (decoy_pos, auth_pos) = match placement(key.parity(i)) {
            Placement::AuthAfterDecoy => (2 * i, 2 * i + 1),
            Placement::AuthBeforeDecoy => (2 * i + 1, 2 * i),
        };
        let decoy_basis = if key.even_bit(i) == 0 {
            MeasBasis::Z
        } else {
            MeasBasis::X
        };
        let outcome = qubits[decoy_pos]
            .measure(0, decoy_basis, rng)
            .expect("1-qubit register");
        if contradicts(outcome, record.states[i]) {
            decoy_mismatches += 1;
        }

        let expected = auth_state(key.parity(i));
        let outcome = qubits[auth_pos]
            .measure(0, expected.basis(), rng)
            .expect("1-qubit register");
        if outcome != expected {
            auth_mismatches += 1;
        }
    }
    let qber = decoy_mismatches as f64 / n as f64;
    let auth_mismatch_rate = auth_mismatches as f64 / n as f64;
    let mut verdict = if qber <= thresholds.qber && auth_mismatch_rate <= thresholds.auth_mismatch
    {
        Verdict::Accept
    } else {
        Verdict::Reject
    };
    if forged_detected == Some(true) {
        verdict = Verdict::Reject;
    }
    DecodeOutcome {
        qber,
        auth_mismatch_rate,
        verdict,
    }
}

/// One directed authentication run through a tapped channel.
pub fn p1_directed(
    key: &crate::runtime::AuthKey,
    sender: Party,
    tap: &mut dyn ChannelTap,
    thresholds: Thresholds,
    rng: &mut SeededRng,
    transcript: &mut Transcript,
    step_prefix: &str,
) -> Result<DecodeOutcome, RuntimeError> {
    let (msg, record) = p1_encode(key, rng)?;
    let record_bytes: Vec<u8> = record.states.iter().map(|s| s.bit() | ((s.basis() == MeasBasis::X) as u8) << 1).collect();
    transcript.record(step_prefix, sender, "prepare_decoys", &record_bytes);
    transcript.record(
        step_prefix,
        sender,
        "send_enlarged_sequence",
        &[msg.len() as u8],
    );
    let msg = transmit(msg, tap, rng);
    let outcome = p1_decode(msg, key, &record, thresholds, rng);
    let receiver = if sender == Party::Alice {
        Party::Bob
    } else {
        Party::Alice
    };
    transcript.record(
        step_prefix,
        receiver,
        "verdict",
        &[
            u8::from(outcome.verdict == Verdict::Reject),
            (outcome.qber * 255.0).round() as u8,
            (outcome.auth_mismatch_rate * 255.0).round() as u8,
        ],
    );
    Ok(outcome)
}

/// Mutual authentication (Steps 1.1–1.5): Alice→Bob, then Bob→Alice with the
/// same key and rules. Returns (Alice's report on Bob, Bob's report on
/// Alice).
pub fn p1_mutual(
    key: &crate::runtime::AuthKey,
    tap_ab: &mut dyn ChannelTap,
    tap_ba: &mut dyn ChannelTap,
    thresholds: Thresholds,
    rng: &mut SeededRng,
) -> Result<(ProtocolReport, ProtocolReport), RuntimeError> {
    let n = key.pairs();
    let mut transcript = Transcript::new();
    let forward = p1_directed(key, Party::Alice, tap_ab, thresholds, rng, &mut transcript, "1.2")?;
    let backward = p1_directed(key, Party::Bob, tap_ba, thresholds, rng, &mut transcript, "1.4")?;
    let report_b = ProtocolReport {
        verdict: forward.verdict,
        qber: forward.qber,
        auth_mismatch_rate: forward.auth_mismatch_rate,
        transcript: transcript.clone(),
        rounds: n,
    };
    let report_a = ProtocolReport {
        verdict: backward.verdict,
        qber: backward.qber,
        auth_mismatch_rate: backward.auth_mismatch_rate,
        transcript,
        rounds: n,
    };
    Ok((report_a, report_b))
}
