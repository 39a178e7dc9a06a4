mod common;

use common::*;
use cycle_relations::arith::Ring;
use proptest::prelude::*;

proptest! {
    #[test]
    fn rational_ring(a in rational(), b in rational(), c in rational()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn poly_ring(a in dense_poly(), b in dense_poly(), c in dense_poly()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn taut_ring(a in taut_element(GENUS), b in taut_element(GENUS), c in taut_element(GENUS)) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn grr_ring(a in grr_element(), b in grr_element(), c in grr_element()) {
        ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn laurent_ring(a in laurent(), b in laurent(), c in laurent()) {
        laurent_axioms(&a, &b, &c)?;
    }

    #[test]
    fn truncated_products(p in dense_poly(), q in dense_poly(), vp in -3i64..3, vq in -3i64..3, op in 0i64..6, oq in 0i64..6) {
        truncation_sound(&p, &q, (vp, op), (vq, oq))?;
    }

    #[test]
    fn grading_adds(x in homogeneous_taut(GENUS), y in homogeneous_taut(GENUS)) {
        taut_grading(&x, &y)?;
    }

    #[test]
    fn monomial_grading_adds(m in taut_monomial(GENUS), n in taut_monomial(GENUS)) {
        monomial_grading(&m, &n)?;
    }

    #[test]
    fn codimension_adds(x in grr_element(), y in grr_element()) {
        grr_grading(&x, &y)?;
    }

    #[test]
    fn element_json(x in taut_element(GENUS)) {
        element_round_trip(&x)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn family_json((f, g, d, r) in family_params()) {
        family_round_trip(f, g, d, r)?;
    }

    #[test]
    fn families_are_homogeneous((f, g, d, r) in family_params()) {
        let fam = cycle_relations::relations::gen_family(f, g, d, r).unwrap();
        prop_assert!(fam.check_invariants().is_ok());
        prop_assert!(fam.items.iter().all(|i| !i.element.is_zero() && i.element.is_homogeneous()));
    }
}
