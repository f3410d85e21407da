//! Monte Carlo estimates set against the closed-form information
//! quantities for the info-tables subcommand.

use std::collections::HashMap;

use qia_core::adversary::{MeasureResend, ProtocolId};
use qia_core::analysis::{
    info_report, joint_measure_resend, shannon, ObservedParty,
};
use qia_core::protocol1::auth_state;
use qia_core::protocol2::encode_block;
use qia_core::protocol3::{p3_round_with, CharlieChoice, CnotTarget, HopTaps};
use qia_core::qcore::{BellLabel, PauliLabel, PureState, StateLabel};
use qia_core::runtime::{transmit, HonestTap, Party, QubitMessage, SeededRng};
use rand::Rng;

use crate::output::InfoRow;

/// Empirical joint distribution of (sent state, observed outcome) over
/// measure-resent positions.
fn empirical_joint(
    protocol: ProtocolId,
    party: ObservedParty,
    positions: usize,
    rng: &mut SeededRng,
) -> HashMap<(StateLabel, StateLabel), f64> {
    let mut counts = HashMap::<(StateLabel, StateLabel), usize>::new();
    let mut eve = MeasureResend::new();
    for _ in 0..positions {
        let sent = match protocol {
            ProtocolId::P1 => auth_state(rng.gen_range(0..2u8)),
            ProtocolId::P2 => encode_block(rng.gen_range(0..2u8), rng.gen_range(0..2u8)),
            ProtocolId::P3 => unreachable!("no bare states travel in protocol 3"),
        };
        let msg = QubitMessage::new(Party::Alice, vec![PureState::prepare_basis_state(sent)]);
        let mut msg = transmit(msg, &mut eve, rng);
        let observed = match party {
            ObservedParty::Eve => *eve.records.last().expect("one record per position"),
            ObservedParty::Bob => msg.qubits_mut()[0].measure(0, sent.basis(), rng).unwrap(),
        };
        *counts.entry((sent, observed)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(k, v)| (k, v as f64 / positions as f64))
        .collect()
}

fn empirical_entropies(joint: &HashMap<(StateLabel, StateLabel), f64>) -> (f64, f64, f64) {
    let mut pa = HashMap::<StateLabel, f64>::new();
    let mut pb = HashMap::<StateLabel, f64>::new();
    for (&(a, b), &p) in joint {
        *pa.entry(a).or_default() += p;
        *pb.entry(b).or_default() += p;
    }
    let h_b = shannon(&pb.values().copied().collect::<Vec<_>>());
    let mut h_b_given_a = 0.0;
    for (&a, &p_a) in &pa {
        let cond: Vec<f64> = joint
            .iter()
            .filter(|(&(x, _), _)| x == a)
            .map(|(_, &p)| p / p_a)
            .collect();
        h_b_given_a += p_a * shannon(&cond);
    }
    (h_b, h_b_given_a, h_b - h_b_given_a)
}

/// Empirical mutual information between the key block and Eve's
/// measure-resend outcome on the travelling particle.
fn empirical_travel_leak(particle: CnotTarget, rounds: usize, rng: &mut SeededRng) -> f64 {
    let mut joint = HashMap::<(u8, StateLabel), usize>::new();
    for _ in 0..rounds {
        let code: u8 = rng.gen_range(0..4);
        let label = BellLabel::from_code(code);
        let pauli = PauliLabel::from_code(code);
        let mut eve = MeasureResend::new();
        let mut honest = [HonestTap; 4];
        let [_, b, c, d] = &mut honest;
        let mut taps = match particle {
            CnotTarget::Particle2 => HopTaps {
                alice_to_charlie: &mut eve,
                bob_to_charlie: b,
                charlie_to_bob: c,
                charlie_to_alice: d,
            },
            CnotTarget::Particle4 => HopTaps {
                alice_to_charlie: b,
                bob_to_charlie: &mut eve,
                charlie_to_bob: c,
                charlie_to_alice: d,
            },
        };
        let _ = p3_round_with(
            label,
            pauli,
            label,
            pauli,
            CharlieChoice::random(rng),
            0,
            &mut taps,
            rng,
        );
        let outcome = *eve.records.last().expect("eve measured the particle");
        *joint.entry((code, outcome)).or_default() += 1;
    }
    let total = rounds as f64;
    let mut pk = [0.0f64; 4];
    let mut po = HashMap::<StateLabel, f64>::new();
    let mut pj = Vec::new();
    for (&(k, o), &c) in &joint {
        let p = c as f64 / total;
        pk[k as usize] += p;
        *po.entry(o).or_default() += p;
        pj.push(p);
    }
    shannon(&pk) + shannon(&po.values().copied().collect::<Vec<_>>()) - shannon(&pj)
}

/// Builds the full table: closed-form entropies, mutual informations and
/// Holevo bounds next to their Monte Carlo estimates.
pub fn info_table(positions: usize, seed: u64) -> Vec<InfoRow> {
    let mut rng = SeededRng::substream(seed, 0);
    let mut rows = Vec::new();

    for (protocol, name) in [(ProtocolId::P1, "P1"), (ProtocolId::P2, "P2")] {
        let bob = info_report(&joint_measure_resend(protocol, ObservedParty::Bob)).unwrap();
        let ej = empirical_joint(protocol, ObservedParty::Bob, positions, &mut rng);
        let (h_b, h_b_given_a, mi) = empirical_entropies(&ej);
        rows.push(InfoRow { protocol: name, quantity: "H(B|A)", closed_form: bob.h_b_given_a, monte_carlo: h_b_given_a, tolerance: 0.02 });
        rows.push(InfoRow { protocol: name, quantity: "H(B)", closed_form: bob.h_b, monte_carlo: h_b, tolerance: 0.02 });
        rows.push(InfoRow { protocol: name, quantity: "I(A:B)", closed_form: bob.mutual_ab, monte_carlo: mi, tolerance: 0.02 });

        let eve = info_report(&joint_measure_resend(protocol, ObservedParty::Eve)).unwrap();
        let ej = empirical_joint(protocol, ObservedParty::Eve, positions, &mut rng);
        let (h_e, h_e_given_a, mi) = empirical_entropies(&ej);
        rows.push(InfoRow { protocol: name, quantity: "H(E|A)", closed_form: eve.h_b_given_a, monte_carlo: h_e_given_a, tolerance: 0.02 });
        rows.push(InfoRow { protocol: name, quantity: "H(E)", closed_form: eve.h_b, monte_carlo: h_e, tolerance: 0.02 });
        rows.push(InfoRow { protocol: name, quantity: "I(A:E)", closed_form: eve.mutual_ab, monte_carlo: mi, tolerance: 0.02 });
        // The bound itself is closed-form; the estimate column repeats the
        // empirical mutual information it must dominate.
        rows.push(InfoRow { protocol: name, quantity: "holevo_bound>=I(A:E)", closed_form: eve.holevo_bound, monte_carlo: mi, tolerance: eve.holevo_bound });
    }

    let p3_rounds = (positions / 10).max(1_000);
    for (particle, quantity) in [
        (CnotTarget::Particle2, "chi(rho_2)"),
        (CnotTarget::Particle4, "chi(rho_4)"),
    ] {
        let closed = qia_core::analysis::holevo_p3_travel(particle);
        let leak = empirical_travel_leak(particle, p3_rounds, &mut rng);
        rows.push(InfoRow { protocol: "P3", quantity, closed_form: closed, monte_carlo: leak, tolerance: 0.01 });
    }
    rows
}
