//! Attack-strategy statistics: impersonation pass probabilities, the
//! measure-resend record distribution, and the ancilla forgery against
//! Protocol 3 with its closed-form pass rate.

use num_complex::Complex64 as C;
use qia_core::adversary::{
    ancilla_forge_p3, impersonation_trial, AncillaForgeAttack, MeasureResend, ProtocolId,
    UNBIASED_BRANCH,
};
use qia_core::analysis::{eve_failure_p3, eve_success_p3};
use qia_core::protocol3::{CharlieChoice, CnotTarget};
use qia_core::qcore::StateLabel;
use qia_core::runtime::{transmit, Party, QubitMessage, SeededRng, Thresholds};
use rand::Rng;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

fn random_branch(rng: &mut SeededRng) -> [C; 4] {
    let mut branch = [C::new(0.0, 0.0); 4];
    loop {
        let mut norm_sqr = 0.0;
        for slot in &mut branch {
            *slot = C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
            norm_sqr += slot.norm_sqr();
        }
        if norm_sqr > 1e-3 {
            let norm = norm_sqr.sqrt();
            for slot in &mut branch {
                *slot /= norm;
            }
            return branch;
        }
    }
}

// --- impersonation pass probabilities --------------------------------------

#[test]
fn protocol1_single_block_impersonation_passes_a_quarter() {
    let mut rng = SeededRng::new(40);
    let trials = 10_000usize;
    let passes = (0..trials)
        .filter(|_| !impersonation_trial(ProtocolId::P1, 1, Thresholds::default(), &mut rng))
        .count();
    let rate = passes as f64 / trials as f64;
    assert!((rate - 0.25).abs() < 0.01, "pass rate {rate}");
}

#[test]
fn protocol3_two_round_impersonation_passes_one_sixteenth() {
    let mut rng = SeededRng::new(41);
    let trials = 20_000usize;
    let passes = (0..trials)
        .filter(|_| !impersonation_trial(ProtocolId::P3, 2, Thresholds::default(), &mut rng))
        .count();
    let rate = passes as f64 / trials as f64;
    assert!((rate - 1.0 / 16.0).abs() < 0.005, "pass rate {rate}");
}

#[test]
fn zero_round_impersonation_passes_vacuously() {
    let mut rng = SeededRng::new(42);
    for protocol in [ProtocolId::P1, ProtocolId::P2, ProtocolId::P3] {
        assert!(!impersonation_trial(protocol, 0, Thresholds::default(), &mut rng));
    }
}

// --- measure-resend records --------------------------------------------------

#[test]
fn eve_records_on_zero_follow_the_half_quarter_quarter_law() {
    let mut rng = SeededRng::new(43);
    let trials = 100_000usize;
    let mut eve = MeasureResend::new();
    for _ in 0..trials {
        let msg = QubitMessage::new(
            Party::Alice,
            vec![qia_core::qcore::PureState::prepare_basis_state(StateLabel::Zero)],
        );
        let _ = transmit(msg, &mut eve, &mut rng);
    }
    let freq = |label: StateLabel| {
        eve.records.iter().filter(|&&r| r == label).count() as f64 / trials as f64
    };
    assert!((freq(StateLabel::Zero) - 0.5).abs() < 0.01);
    assert!(freq(StateLabel::One) < 1e-9);
    assert!((freq(StateLabel::Plus) - 0.25).abs() < 0.01);
    assert!((freq(StateLabel::Minus) - 0.25).abs() < 0.01);
}

#[test]
fn fractional_measure_resend_touches_that_share() {
    let mut rng = SeededRng::new(44);
    let trials = 20_000usize;
    let mut eve = MeasureResend::with_fraction(0.3);
    for _ in 0..trials {
        let msg = QubitMessage::new(
            Party::Alice,
            vec![qia_core::qcore::PureState::prepare_basis_state(StateLabel::Plus)],
        );
        let _ = transmit(msg, &mut eve, &mut rng);
    }
    let touched = eve.records.len() as f64 / trials as f64;
    assert!((touched - 0.3).abs() < 0.02, "touched {touched}");
}

#[test]
fn empty_messages_pass_untouched() {
    let mut rng = SeededRng::new(45);
    let msg = QubitMessage::new(Party::Alice, Vec::new());
    let mut eve = MeasureResend::new();
    let msg = transmit(msg, &mut eve, &mut rng);
    assert!(msg.is_empty());
    assert!(eve.records.is_empty());
}

// --- ancilla forgery -----------------------------------------------------------

#[test]
fn the_extremal_forgery_passes_three_eighths() {
    let branch0 = [c(0.0), c(SQRT_HALF), c(SQRT_HALF), c(0.0)];
    let attack = ancilla_forge_p3(branch0, None).unwrap();
    assert!((attack.expected_pass_probability() - 0.375).abs() < 1e-12);
    let mut rng = SeededRng::new(46);
    let rate = attack.pass_rate(100_000, &mut rng);
    assert!((rate - 0.375).abs() < 0.01, "pass rate {rate}");
}

#[test]
fn a_transparent_tap_with_a0_only_passes_one_eighth() {
    let branch0 = [c(1.0), c(0.0), c(0.0), c(0.0)];
    let attack = ancilla_forge_p3(branch0, None).unwrap();
    assert!((attack.expected_pass_probability() - 0.125).abs() < 1e-12);
    let mut rng = SeededRng::new(47);
    let rate = attack.pass_rate(100_000, &mut rng);
    assert!((rate - 0.125).abs() < 0.01, "pass rate {rate}");
}

#[test]
fn random_forgeries_match_the_closed_form_within_three_sigma() {
    let mut rng = SeededRng::new(48);
    let rounds = 20_000usize;
    for _ in 0..8 {
        let branch0 = random_branch(&mut rng);
        let attack = ancilla_forge_p3(branch0, None).unwrap();
        let expected = eve_success_p3(&branch0).unwrap();
        assert!((attack.expected_pass_probability() - expected).abs() < 1e-12);
        let rate = attack.pass_rate(rounds, &mut rng);
        let sigma = (expected * (1.0 - expected) / rounds as f64).sqrt();
        assert!(
            (rate - expected).abs() <= 3.0 * sigma.max(1e-3),
            "rate {rate} vs {expected}"
        );
    }
}

#[test]
fn explicit_second_branches_follow_the_general_law() {
    // With an explicit |0⟩-branch the pass rate is
    // 1/4(|b0|²+|c0|²) + 1/4(|b1|²+|c1|²), which reduces to the closed
    // form only for unbiased completions.
    let branch0 = [c(0.0), c(SQRT_HALF), c(SQRT_HALF), c(0.0)];
    let branch1 = [c(SQRT_HALF), c(0.0), c(0.0), c(SQRT_HALF)];
    let attack = AncillaForgeAttack::new(branch0, Some(branch1)).unwrap();
    assert!((attack.expected_pass_probability() - 0.25).abs() < 1e-12);
    let mut rng = SeededRng::new(49);
    let rate = attack.pass_rate(50_000, &mut rng);
    assert!((rate - 0.25).abs() < 0.01, "pass rate {rate}");
}

#[test]
fn the_pass_rate_is_invariant_over_charlies_choices() {
    let branch0 = [c(0.0), c(SQRT_HALF), c(SQRT_HALF), c(0.0)];
    let attack = ancilla_forge_p3(branch0, None).unwrap();
    let mut rng = SeededRng::new(50);
    for control in [StateLabel::Plus, StateLabel::Minus] {
        for target in [CnotTarget::Particle2, CnotTarget::Particle4] {
            let choice = CharlieChoice { control, target };
            let rounds = 20_000usize;
            let passes = (0..rounds)
                .filter(|_| attack.run_round_with(choice, &mut rng))
                .count();
            let rate = passes as f64 / rounds as f64;
            assert!((rate - 0.375).abs() < 0.015, "choice {choice:?}: rate {rate}");
        }
    }
}

#[test]
fn success_and_failure_expressions_sum_to_one() {
    let mut rng = SeededRng::new(51);
    for _ in 0..100 {
        let branch0 = random_branch(&mut rng);
        let s = eve_success_p3(&branch0).unwrap();
        let f = eve_failure_p3(&branch0).unwrap();
        assert!((s + f - 1.0).abs() < 1e-9, "s={s} f={f}");
    }
}

#[test]
fn the_closed_form_never_exceeds_three_eighths_on_the_simplex() {
    // Grid over squared magnitudes at resolution 0.05 plus the analytic
    // maximum: the success probability peaks at |b0|²+|c0|² = 1.
    let steps = 20usize;
    let mut max_seen: f64 = 0.0;
    for i in 0..=steps {
        for j in 0..=steps - i {
            for k in 0..=steps - i - j {
                let l = steps - i - j - k;
                let branch0 = [
                    c((i as f64 / steps as f64).sqrt()),
                    c((j as f64 / steps as f64).sqrt()),
                    c((k as f64 / steps as f64).sqrt()),
                    c((l as f64 / steps as f64).sqrt()),
                ];
                max_seen = max_seen.max(eve_success_p3(&branch0).unwrap());
            }
        }
    }
    assert!((max_seen - 0.375).abs() < 1e-12, "max {max_seen}");
}

#[test]
fn monte_carlo_over_the_success_grid_stays_below_the_maximum() {
    // The simulated pass rate depends on the branch only through
    // |b0|² + |c0|²; sweep that sum over a 0.05 grid.
    let mut rng = SeededRng::new(52);
    let rounds = 10_000usize;
    let mut max_rate: f64 = 0.0;
    for step in 0..=20usize {
        let s = step as f64 / 20.0;
        let branch0 = [
            c(((1.0 - s) / 2.0).sqrt()),
            c((s / 2.0).sqrt()),
            c((s / 2.0).sqrt()),
            c(((1.0 - s) / 2.0).sqrt()),
        ];
        let attack = ancilla_forge_p3(branch0, None).unwrap();
        max_rate = max_rate.max(attack.pass_rate(rounds, &mut rng));
    }
    let sigma = (0.375 * 0.625 / rounds as f64).sqrt();
    assert!(max_rate <= 0.375 + 3.0 * sigma, "max rate {max_rate}");
}

#[test]
fn non_normalized_branches_are_rejected() {
    let branch0 = [c(1.0), c(1.0), c(0.0), c(0.0)];
    assert!(ancilla_forge_p3(branch0, None).is_err());
    let branch0 = [c(1.0), c(0.0), c(0.0), c(0.0)];
    let branch1 = [c(0.5), c(0.0), c(0.0), c(0.0)];
    assert!(AncillaForgeAttack::new(branch0, Some(branch1)).is_err());
}

#[test]
fn the_default_completion_is_unbiased() {
    let w: f64 = UNBIASED_BRANCH.iter().map(|x| x.norm_sqr()).sum();
    assert!((w - 1.0).abs() < 1e-12);
    assert!((UNBIASED_BRANCH[1].norm_sqr() + UNBIASED_BRANCH[2].norm_sqr() - 0.5).abs() < 1e-12);
}
