//! Protocol 3 behaviour: the published five-particle expansion, the
//! outcome tables of the honest and substituted rounds, exhaustive
//! key-independence of the XOR rule, wrong-guess detection, travelling
//! particle opacity, and verifier ignorance.

use std::collections::HashMap;

use qia_core::adversary::{impersonation_trial, ProtocolId};
use qia_core::analysis::{holevo_p3_travel, shannon};
use qia_core::protocol3::{
    expected_swap_coefficients, outcome_distribution, p3_protocol, p3_round, p3_round_with,
    swap_stage_state, verify_eq5, verify_swap_expansion_against, CharlieChoice, CnotTarget,
    HopTaps, XorVerdict,
};
use qia_core::qcore::{BellLabel, DensityMatrix, PauliLabel, StateLabel};
use qia_core::runtime::{AuthKey, HonestTap, SeededRng, Thresholds, Verdict};

fn all_choices() -> [CharlieChoice; 4] {
    [
        CharlieChoice { control: StateLabel::Plus, target: CnotTarget::Particle2 },
        CharlieChoice { control: StateLabel::Plus, target: CnotTarget::Particle4 },
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle4 },
    ]
}

// --- the published expansion ----------------------------------------------

#[test]
fn the_five_particle_expansion_verifies() {
    assert!(verify_eq5());
}

#[test]
fn a_tampered_sign_in_the_expected_table_fails_verification() {
    let mut expected = expected_swap_coefficients();
    expected[0].1 = -expected[0].1;
    assert!(!verify_swap_expansion_against(&expected));
}

#[test]
fn identity_instead_of_the_keyed_pauli_changes_the_expansion() {
    // The row probabilities survive the substitution; the signed
    // coefficients do not.
    use qia_core::qcore::inner;
    let state = swap_stage_state(
        BellLabel::PSI_PLUS,
        PauliLabel::IDENTITY,
        BellLabel::PSI_PLUS,
        PauliLabel::IDENTITY,
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
    );
    let unit = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let published = expected_swap_coefficients();
    let matches_published = published.iter().all(|&((r14, r23, z), sign)| {
        let got = inner(
            qia_core::protocol3::swap_basis_vector(r14, r23, z).amps(),
            state.amps(),
        );
        (got.re - sign * unit).abs() < 1e-9 && got.im.abs() < 1e-9
    });
    assert!(!matches_published);
}

#[test]
fn a_plus_control_keeps_magnitudes_but_flips_signs() {
    use qia_core::qcore::inner;
    let minus_state = swap_stage_state(
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
    );
    let plus_state = swap_stage_state(
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        CharlieChoice { control: StateLabel::Plus, target: CnotTarget::Particle2 },
    );
    let mut some_sign_differs = false;
    for r14 in BellLabel::all() {
        for r23 in BellLabel::all() {
            for z in 0..=1u8 {
                let basis = qia_core::protocol3::swap_basis_vector(r14, r23, z);
                let a = inner(basis.amps(), minus_state.amps());
                let b = inner(basis.amps(), plus_state.amps());
                assert!((a.norm() - b.norm()).abs() < 1e-9, "magnitude mismatch");
                if (a - b).norm() > 1e-9 && a.norm() > 1e-9 {
                    some_sign_differs = true;
                }
            }
        }
    }
    assert!(some_sign_differs);
}

// --- Table 7 ---------------------------------------------------------------

#[test]
fn table7_enumeration_is_exact() {
    let state = swap_stage_state(
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
    );
    let dist = outcome_distribution(&state);
    assert_eq!(dist.len(), 8, "exactly the eight published rows");
    for ((r14, r23, z), p) in dist {
        assert!((p - 0.125).abs() < 1e-12);
        let verdict = XorVerdict::evaluate(r14, r23, z);
        assert!(verdict.pass);
        if z == 0 {
            assert_eq!(r14, r23);
        } else {
            assert_eq!(r14.xor(r23), 0b10);
        }
    }
}

#[test]
fn table7_monte_carlo_frequencies_are_one_eighth() {
    let mut rng = SeededRng::new(30);
    let mut honest = [HonestTap; 4];
    let trials = 100_000usize;
    let mut counts = HashMap::<(u8, u8, u8), usize>::new();
    for _ in 0..trials {
        let mut taps = HopTaps::honest(&mut honest);
        let outcome = p3_round_with(
            BellLabel::PSI_PLUS,
            PauliLabel::I_SIGMA_Y,
            BellLabel::PSI_PLUS,
            PauliLabel::I_SIGMA_Y,
            CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
            0,
            &mut taps,
            &mut rng,
        );
        assert!(outcome.verdict.pass);
        *counts
            .entry((outcome.r14.code(), outcome.r23.code(), outcome.verdict.r5))
            .or_default() += 1;
    }
    assert_eq!(counts.len(), 8);
    for (_, c) in counts {
        let freq = c as f64 / trials as f64;
        assert!((freq - 0.125).abs() < 0.01, "frequency {freq}");
    }
}

// --- Table 8 ---------------------------------------------------------------

#[test]
fn substituting_phi_plus_lands_only_in_the_table8_rows() {
    let state = swap_stage_state(
        BellLabel::PHI_PLUS,
        PauliLabel::IDENTITY,
        BellLabel::PSI_PLUS,
        PauliLabel::I_SIGMA_Y,
        CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
    );
    let dist = outcome_distribution(&state);
    assert_eq!(dist.len(), 8);
    use BellLabel as B;
    let table8 = [
        (B::PSI_PLUS, B::PSI_MINUS, 0u8),
        (B::PSI_MINUS, B::PSI_PLUS, 0),
        (B::PHI_PLUS, B::PHI_MINUS, 0),
        (B::PHI_MINUS, B::PHI_PLUS, 0),
        (B::PSI_PLUS, B::PHI_MINUS, 1),
        (B::PSI_MINUS, B::PHI_PLUS, 1),
        (B::PHI_PLUS, B::PSI_MINUS, 1),
        (B::PHI_MINUS, B::PSI_PLUS, 1),
    ];
    for (key, p) in &dist {
        assert!((p - 0.125).abs() < 1e-12);
        assert!(table8.contains(key), "unexpected row {key:?}");
        let verdict = XorVerdict::evaluate(key.0, key.1, key.2);
        assert!(!verdict.pass, "Table 8 rows always fail the XOR rule");
        assert!(verdict.xor == 0b01 || verdict.xor == 0b11);
    }
}

#[test]
fn uniform_bell_guesses_pass_a_quarter_of_the_rounds() {
    let mut rng = SeededRng::new(31);
    let mut honest = [HonestTap; 4];
    let trials = 100_000usize;
    let mut passes = 0usize;
    for _ in 0..trials {
        let (guess_label, guess_pauli) = qia_core::protocol3::forged_alice_inputs(&mut rng);
        let mut taps = HopTaps::honest(&mut honest);
        let outcome = p3_round_with(
            guess_label,
            guess_pauli,
            BellLabel::PSI_PLUS,
            PauliLabel::I_SIGMA_Y,
            CharlieChoice::random(&mut rng),
            0,
            &mut taps,
            &mut rng,
        );
        passes += usize::from(outcome.verdict.pass);
    }
    let rate = passes as f64 / trials as f64;
    assert!((rate - 0.25).abs() < 0.01, "pass rate {rate}");
}

// --- exhaustive sweeps ------------------------------------------------------

#[test]
fn the_xor_rule_holds_on_every_honest_branch_for_every_key() {
    for label in BellLabel::all() {
        let pauli = PauliLabel::from_code(label.code());
        for choice in all_choices() {
            let state = swap_stage_state(label, pauli, label, pauli, choice);
            let dist = outcome_distribution(&state);
            let mut total = 0.0;
            for ((r14, r23, z), p) in dist {
                total += p;
                assert!(
                    XorVerdict::evaluate(r14, r23, z).pass,
                    "key {label} choice {choice:?} branch ({r14},{r23},{z}) with p={p}"
                );
            }
            assert!((total - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn every_wrong_bell_guess_fails_with_certainty() {
    for true_label in BellLabel::all() {
        let true_pauli = PauliLabel::from_code(true_label.code());
        for guess in BellLabel::all() {
            if guess == true_label {
                continue;
            }
            let guess_pauli = PauliLabel::from_code(guess.code());
            for choice in all_choices() {
                let state = swap_stage_state(guess, guess_pauli, true_label, true_pauli, choice);
                for ((r14, r23, z), p) in outcome_distribution(&state) {
                    assert!(
                        !XorVerdict::evaluate(r14, r23, z).pass,
                        "guess {guess} vs key {true_label}: branch passes with p={p}"
                    );
                }
            }
        }
    }
}

#[test]
fn charlies_view_is_identically_distributed_across_keys() {
    // The exact (r14, r23, r5) distribution is the same for all four keys:
    // r5 uniform, r14 uniform, r23 determined by the XOR rule. A verifier
    // following the protocol therefore learns nothing about the key.
    let choice = CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 };
    let reference: HashMap<_, _> = {
        let label = BellLabel::PHI_PLUS;
        let state = swap_stage_state(label, PauliLabel::IDENTITY, label, PauliLabel::IDENTITY, choice);
        outcome_distribution(&state).into_iter().collect()
    };
    for label in BellLabel::all() {
        let pauli = PauliLabel::from_code(label.code());
        let state = swap_stage_state(label, pauli, label, pauli, choice);
        for (key, p) in outcome_distribution(&state) {
            let r = reference.get(&key).copied().unwrap_or(0.0);
            assert!((p - r).abs() < 1e-9, "key {label}: branch {key:?}");
        }
    }
}

#[test]
fn empirical_mutual_information_between_key_and_charlies_view_is_negligible() {
    let mut rng = SeededRng::new(33);
    let mut honest = [HonestTap; 4];
    let rounds = 100_000usize;
    let mut joint = HashMap::<(u8, u8, u8, u8), usize>::new();
    for _ in 0..rounds {
        let code: u8 = rand::Rng::gen_range(&mut rng, 0..4);
        let label = BellLabel::from_code(code);
        let pauli = PauliLabel::from_code(code);
        let mut taps = HopTaps::honest(&mut honest);
        let outcome = p3_round_with(
            label,
            pauli,
            label,
            pauli,
            CharlieChoice::random(&mut rng),
            0,
            &mut taps,
            &mut rng,
        );
        *joint
            .entry((code, outcome.r14.code(), outcome.r23.code(), outcome.verdict.r5))
            .or_default() += 1;
    }
    // I(K; V) = H(K) + H(V) - H(K, V).
    let total = rounds as f64;
    let mut pk = [0.0f64; 4];
    let mut pv = HashMap::<(u8, u8, u8), f64>::new();
    let mut pkv = Vec::new();
    for (&(k, a, b, c), &count) in &joint {
        let p = count as f64 / total;
        pk[k as usize] += p;
        *pv.entry((a, b, c)).or_default() += p;
        pkv.push(p);
    }
    let pv: Vec<f64> = pv.into_values().collect();
    let mi = shannon(&pk) + shannon(&pv) - shannon(&pkv);
    assert!(mi.abs() < 0.01, "mutual information {mi}");
}

#[test]
fn measuring_charlies_qubit_first_pins_the_xor_of_the_bell_labels() {
    // Sequential measurement route: finding particle 5 in |0⟩ first forces
    // equal labels on (1,4) and (2,3); finding |1⟩ forces XOR = 10.
    use qia_core::qcore::MeasBasis;
    let mut rng = SeededRng::new(38);
    let mut seen = [false; 2];
    for _ in 0..200 {
        let mut state = swap_stage_state(
            BellLabel::PSI_PLUS,
            PauliLabel::I_SIGMA_Y,
            BellLabel::PSI_PLUS,
            PauliLabel::I_SIGMA_Y,
            CharlieChoice { control: StateLabel::Minus, target: CnotTarget::Particle2 },
        );
        let r5 = state.measure(4, MeasBasis::Z, &mut rng).unwrap();
        let r14 = state.bell_measure(0, 3, &mut rng).unwrap();
        let r23 = state.bell_measure(1, 2, &mut rng).unwrap();
        match r5 {
            StateLabel::Zero => {
                seen[0] = true;
                assert_eq!(r14.xor(r23), 0b00);
            }
            _ => {
                seen[1] = true;
                assert_eq!(r14.xor(r23), 0b10);
            }
        }
    }
    assert!(seen[0] && seen[1]);
}

// --- travelling-particle opacity -------------------------------------------

#[test]
fn the_travelling_particles_are_maximally_mixed_for_every_key() {
    for label in BellLabel::all() {
        let pauli = PauliLabel::from_code(label.code());
        for choice in all_choices() {
            let state = swap_stage_state(label, pauli, label, pauli, choice);
            for particle in [CnotTarget::Particle2, CnotTarget::Particle4] {
                let rho = state.partial_trace(&[particle.qubit()]).unwrap();
                let mixed = DensityMatrix::maximally_mixed(1);
                for (a, b) in rho.entries().iter().zip(mixed.entries()) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn the_holevo_quantity_of_the_travelling_particles_is_zero() {
    assert!(holevo_p3_travel(CnotTarget::Particle2).abs() < 1e-12);
    assert!(holevo_p3_travel(CnotTarget::Particle4).abs() < 1e-12);
}

// --- protocol-level runs -----------------------------------------------------

#[test]
fn honest_protocol_accepts_for_every_key_up_to_eight_bits() {
    let mut rng = SeededRng::new(34);
    let mut honest = [HonestTap; 4];
    for len in [2usize, 4, 6, 8] {
        for key in AuthKey::enumerate(len) {
            let mut taps = HopTaps::honest(&mut honest);
            let report =
                p3_protocol(&key, &mut taps, Thresholds::default(), &mut rng).unwrap();
            assert_eq!(report.verdict, Verdict::Accept, "key {:?}", key.bits());
            assert_eq!(report.qber, 0.0);
            assert_eq!(report.auth_mismatch_rate, 0.0);
        }
    }
}

#[test]
fn honest_rounds_pass_for_random_long_keys() {
    let mut rng = SeededRng::new(35);
    let mut honest = [HonestTap; 4];
    for _ in 0..50 {
        let key = AuthKey::random(16, &mut rng).unwrap();
        for i in 0..key.pairs() {
            let mut taps = HopTaps::honest(&mut honest);
            let verdict = p3_round(key.pair(i), CharlieChoice::random(&mut rng), &mut taps, &mut rng);
            assert!(verdict.pass);
        }
    }
}

#[test]
fn impersonation_detection_follows_the_quarter_power_law() {
    let mut rng = SeededRng::new(36);
    let trials = 4_000usize;
    for n in [1usize, 2, 3, 5, 8] {
        let detected = (0..trials)
            .filter(|_| impersonation_trial(ProtocolId::P3, n, Thresholds::default(), &mut rng))
            .count();
        let rate = detected as f64 / trials as f64;
        let p = 1.0 - 0.25f64.powi(n as i32);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (rate - p).abs() <= 3.0 * sigma.max(1e-3),
            "n={n}: rate {rate} vs {p}"
        );
    }
}

#[test]
fn measure_resend_on_a_travel_hop_disturbs_the_round() {
    // Eve measuring particle 2 en route to Charlie destroys the swap
    // correlations on a detectable fraction of rounds and trips decoys.
    let mut rng = SeededRng::new(37);
    let trials = 2_000usize;
    let mut detections = 0usize;
    for _ in 0..trials {
        let key = AuthKey::random(2, &mut rng).unwrap();
        let mut eve = qia_core::adversary::MeasureResend::new();
        let mut honest = [HonestTap; 4];
        let [_, b, c, d] = &mut honest;
        let mut taps = HopTaps {
            alice_to_charlie: &mut eve,
            bob_to_charlie: b,
            charlie_to_bob: c,
            charlie_to_alice: d,
        };
        let report = p3_protocol(&key, &mut taps, Thresholds::default(), &mut rng).unwrap();
        detections += usize::from(report.verdict == Verdict::Reject);
    }
    let rate = detections as f64 / trials as f64;
    assert!(rate > 0.5, "detection rate {rate}");
}
