//! Property tests for the algebraic invariants that hold for every input,
//! not just the seeded cases in the unit tests.

use proptest::prelude::*;

use tempens_core::linalg::ComplexMatrix;
use tempens_core::pauli::PauliString;
use tempens_core::C64;

fn pauli_strategy(n: u32) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (0..=mask, 0..=mask).prop_map(move |(x, z)| PauliString::new(n, x, z).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_matches_dense_kronecker_oracle(
        p in pauli_strategy(3),
        q in pauli_strategy(3),
    ) {
        let (r, phase) = p.multiply(&q).unwrap();
        let lhs = p.to_dense().mul(&q.to_dense()).unwrap();
        let rhs = r.to_dense().scale(phase);
        prop_assert!(lhs.sub(&rhs).maxnorm() < 1e-14);
        // The product phase is always a fourth root of unity.
        prop_assert!((phase.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_action_is_an_involution(p in pauli_strategy(4), b in 0u64..16) {
        let (b1, ph1) = p.apply_to_basis_state(b);
        let (b2, ph2) = p.apply_to_basis_state(b1);
        prop_assert_eq!(b2, b);
        prop_assert!((ph1 * ph2 - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn text_form_round_trips(p in pauli_strategy(5)) {
        let text = p.to_string();
        let back: PauliString = text.parse().unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn matrix_application_commutes_with_composition(
        p in pauli_strategy(2),
        q in pauli_strategy(2),
        entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16),
    ) {
        // (P·Q)·M up to the product phase equals P·(Q·M).
        let m = ComplexMatrix::from_row_major(
            4,
            entries.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        );
        let sequential = p
            .apply_to_matrix_left(&q.apply_to_matrix_left(&m).unwrap())
            .unwrap();
        let (r, phase) = p.multiply(&q).unwrap();
        let combined = r.apply_to_matrix_left(&m).unwrap().scale(phase);
        prop_assert!(sequential.sub(&combined).maxnorm() < 1e-13);
    }
}
