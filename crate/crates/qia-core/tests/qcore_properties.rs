//! Randomized property suites for the kernel: norm preservation under
//! gates, measurement completeness, Bell round trips, partial-trace
//! identities and entropy bounds, each over a thousand cases.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use qia_core::qcore::{
    holevo, von_neumann_entropy, BellLabel, DensityMatrix, MeasBasis, PauliLabel, PureState,
    StateLabel,
};
use qia_core::runtime::SeededRng;

fn arb_state(num_qubits: usize) -> impl Strategy<Value = PureState> {
    let dim = 1usize << num_qubits;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map(
        "norm too small",
        |raw| {
            let mut amps: Vec<C> = raw.iter().map(|&(re, im)| C::new(re, im)).collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            for a in &mut amps {
                *a /= norm;
            }
            PureState::from_amps(amps).ok()
        },
    )
}

fn arb_density(num_qubits: usize) -> impl Strategy<Value = DensityMatrix> {
    // Random mixtures of up to four pure states.
    prop::collection::vec((arb_state(num_qubits), 1e-3f64..1.0), 1..=4).prop_map(|parts| {
        let total: f64 = parts.iter().map(|(_, w)| w).sum();
        let mix: Vec<(f64, DensityMatrix)> = parts
            .into_iter()
            .map(|(s, w)| (w / total, DensityMatrix::from_pure(&s)))
            .collect();
        DensityMatrix::mixture(&mix).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gates_preserve_the_norm(
        state in arb_state(3),
        pauli_code in 0u8..4,
        qubit in 0usize..3,
        control in 0usize..3,
        hadamard in proptest::bool::ANY,
    ) {
        let mut s = state;
        s.apply_pauli(qubit, PauliLabel::from_code(pauli_code)).unwrap();
        if hadamard {
            s.apply_hadamard(qubit).unwrap();
        }
        let target = (control + 1) % 3;
        s.apply_cnot(control, target).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn measurement_outcome_probabilities_are_complete(
        state in arb_state(3),
        qubit in 0usize..3,
    ) {
        for basis in [MeasBasis::Z, MeasBasis::X] {
            let p0 = state.outcome_probability(qubit, basis, 0).unwrap();
            let p1 = state.outcome_probability(qubit, basis, 1).unwrap();
            prop_assert!((p0 + p1 - 1.0).abs() < 1e-9);
        }
        let bell: f64 = state.bell_probabilities(0, 2).unwrap().iter().sum();
        prop_assert!((bell - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bell_preparation_and_measurement_round_trip(
        code in 0u8..4,
        seed in 0u64..1_000_000,
    ) {
        let label = BellLabel::from_code(code);
        let mut rng = SeededRng::new(seed);
        let mut s = PureState::prepare_bell(label);
        prop_assert_eq!(s.bell_measure(0, 1, &mut rng).unwrap(), label);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn partial_trace_of_a_product_recovers_the_left_factor(
        a in arb_state(2),
        b in arb_state(2),
    ) {
        let prod = PureState::tensor(&a, &b).unwrap();
        let reduced = prod.partial_trace(&[0, 1]).unwrap();
        let projector = DensityMatrix::from_pure(&a);
        for (x, y) in reduced.entries().iter().zip(projector.entries()) {
            prop_assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn entropy_stays_between_zero_and_the_register_size(
        rho in arb_density(2),
    ) {
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-9);
        prop_assert!(s <= 2.0 + 1e-9);
    }

    #[test]
    fn holevo_is_bounded_by_the_ensemble_entropy(
        a in arb_state(1),
        b in arb_state(1),
        w in 0.05f64..0.95,
    ) {
        let ensemble = [
            (w, DensityMatrix::from_pure(&a)),
            (1.0 - w, DensityMatrix::from_pure(&b)),
        ];
        let chi = holevo(&ensemble).unwrap();
        prop_assert!(chi >= -1e-9);
        prop_assert!(chi <= 1.0 + 1e-9);
    }

    #[test]
    fn post_measurement_states_are_normalized(
        state in arb_state(3),
        qubit in 0usize..3,
        use_x in proptest::bool::ANY,
        seed in 0u64..1_000_000,
    ) {
        let mut rng = SeededRng::new(seed);
        let mut s = state;
        let basis = if use_x { MeasBasis::X } else { MeasBasis::Z };
        let outcome = s.measure(qubit, basis, &mut rng).unwrap();
        prop_assert_eq!(outcome.basis(), basis);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9);
        // Measuring again in the same basis repeats the outcome.
        prop_assert_eq!(s.measure(qubit, basis, &mut rng).unwrap(), outcome);
    }
}

#[test]
fn state_labels_partition_into_bases() {
    for label in StateLabel::all() {
        assert_eq!(StateLabel::from_basis_bit(label.basis(), label.bit()), label);
        assert_eq!(label.conjugate().basis(), label.basis());
        assert_ne!(label.conjugate(), label);
    }
}
