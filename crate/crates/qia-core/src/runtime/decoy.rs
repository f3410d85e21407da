//! Decoy-qubit lifecycle: preparation, private records, and checking.

use rand::Rng;

use crate::qcore::{MeasBasis, PureState, StateLabel};

use super::{AuthKey, RuntimeError, SeededRng};

/// Alice's private record of exactly which decoy states she prepared.
/// Revealed over the classical channel at check time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoyRecord {
    pub states: Vec<StateLabel>,
}

/// Prepares the n-qubit key-driven decoy sequence: position i is |0⟩ or |1⟩
/// when k_{2i} = 0, |+⟩ or |−⟩ when k_{2i} = 1, the member chosen uniformly.
pub fn make_decoy_sequence(
    key: &AuthKey,
    n: usize,
    rng: &mut SeededRng,
) -> Result<(Vec<PureState>, DecoyRecord), RuntimeError> {
    if key.pairs() < n {
        return Err(RuntimeError::BadKeyLength {
            len: key.len(),
            requirement: "at least 2n bits",
        });
    }
    let mut states = Vec::with_capacity(n);
    let mut record = Vec::with_capacity(n);
    for i in 0..n {
        let basis = if key.even_bit(i) == 0 {
            MeasBasis::Z
        } else {
            MeasBasis::X
        };
        let label = StateLabel::from_basis_bit(basis, rng.gen_range(0..2u8));
        states.push(PureState::prepare_basis_state(label));
        record.push(label);
    }
    Ok((states, DecoyRecord { states: record }))
}

/// Uniform BB84 decoys (Protocol 3 style), with the private record.
pub fn make_bb84_decoys(n: usize, rng: &mut SeededRng) -> (Vec<PureState>, DecoyRecord) {
    let mut states = Vec::with_capacity(n);
    let mut record = Vec::with_capacity(n);
    for _ in 0..n {
        let label = StateLabel::all()[rng.gen_range(0..4usize)];
        states.push(PureState::prepare_basis_state(label));
        record.push(label);
    }
    (states, DecoyRecord { states: record })
}

/// Measures received key-driven decoys in the basis dictated by k_{2i} and
/// compares with the disclosed record. A mismatch is counted only when the
/// outcome contradicts the record, i.e. the record lies in the measured
/// basis and the outcome is its orthogonal partner. Returns the QBER.
pub fn check_decoys(
    received: Vec<PureState>,
    record: &DecoyRecord,
    key: &AuthKey,
    rng: &mut SeededRng,
) -> Result<f64, RuntimeError> {
    if received.len() != record.states.len() {
        return Err(RuntimeError::LengthMismatch {
            expected: record.states.len(),
            got: received.len(),
        });
    }
    if key.pairs() < received.len() {
        return Err(RuntimeError::BadKeyLength {
            len: key.len(),
            requirement: "at least 2n bits",
        });
    }
    if received.is_empty() {
        return Ok(0.0);
    }
    let mut mismatches = 0usize;
    let n = received.len();
    for (i, mut q) in received.into_iter().enumerate() {
        let basis = if key.even_bit(i) == 0 {
            MeasBasis::Z
        } else {
            MeasBasis::X
        };
        let outcome = q.measure(0, basis, rng).expect("1-qubit register");
        if contradicts(outcome, record.states[i]) {
            mismatches += 1;
        }
    }
    Ok(mismatches as f64 / n as f64)
}

/// Measures received BB84 decoys in each record's own basis; counts
/// contradictions. Returns the number of mismatches.
pub fn check_bb84_decoys(
    received: Vec<PureState>,
    record: &DecoyRecord,
    rng: &mut SeededRng,
) -> Result<usize, RuntimeError> {
    if received.len() != record.states.len() {
        return Err(RuntimeError::LengthMismatch {
            expected: record.states.len(),
            got: received.len(),
        });
    }
    let mut mismatches = 0usize;
    for (i, mut q) in received.into_iter().enumerate() {
        let expected = record.states[i];
        let outcome = q.measure(0, expected.basis(), rng).expect("1-qubit register");
        if outcome != expected {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

/// An outcome contradicts a disclosed record only when both live in the same
/// basis and differ; a cross-basis pair is compatible with honest physics.
pub fn contradicts(outcome: StateLabel, record: StateLabel) -> bool {
    outcome.basis() == record.basis() && outcome != record
}
