mod common;

use std::collections::BTreeMap;

use common::*;
use multisym_core::conventions::{parity, Nesting};
use multisym_core::schouten::lie_bracket;
use multisym_core::{Flavor, PhaseSpace};
use proptest::prelude::*;

fn space() -> PhaseSpace {
    PhaseSpace::new(2, 1, Flavor::Extended).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_axioms(a in arb_scalar(space(), 3, 3), b in arb_scalar(space(), 3, 3), c in arb_scalar(space(), 3, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(a in arb_scalar(space(), 3, 3), b in arb_scalar(space(), 3, 3), k in 0usize..6) {
        let lhs = (&a * &b).derivative(k);
        let rhs = &(&a.derivative(k) * &b) + &(&a * &b.derivative(k));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(
        a in arb_scalar(space(), 3, 2),
        b in arb_scalar(space(), 3, 2),
        v in arb_scalar(space(), 2, 2),
        w in arb_scalar(space(), 2, 2),
    ) {
        let values: BTreeMap<usize, _> = [(1, v), (4, w)].into_iter().collect();
        let lhs = (&a * &b).substitute_all(&values);
        let rhs = &a.substitute_all(&values) * &b.substitute_all(&values);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_associative_and_graded_commutative(
        a in arb_form_upto(space(), 2),
        b in arb_form_upto(space(), 2),
        c in arb_form_upto(space(), 2),
    ) {
        prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        let sign = parity(a.degree() * b.degree());
        prop_assert_eq!(a.wedge(&b), b.wedge(&a).scale_int(sign));
    }

    #[test]
    fn d_squares_to_zero(a in arb_form_upto(space(), 4)) {
        prop_assert!(a.d().d().is_zero());
    }

    #[test]
    fn d_is_an_antiderivation(a in arb_form_upto(space(), 2), b in arb_form_upto(space(), 2)) {
        let lhs = a.wedge(&b).d();
        let rhs = &a.d().wedge(&b) + &a.wedge(&b.d()).scale_int(parity(a.degree()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn vector_contraction_is_an_antiderivation(
        v in arb_multivector(space(), 1),
        a in arb_form_upto(space(), 2),
        b in arb_form_upto(space(), 2),
    ) {
        let lhs = v.contract(&a.wedge(&b));
        let rhs = &v.contract(&a).wedge(&b) + &a.wedge(&v.contract(&b)).scale_int(parity(a.degree()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn nesting_of_contractions(
        x in arb_multivector_upto(space(), 2),
        y in arb_multivector_upto(space(), 2),
        a in arb_form(space(), 4),
    ) {
        prop_assert_eq!(x.wedge(&y).contract(&a), y.contract(&x.contract(&a)));
        prop_assert_eq!(
            x.wedge(&y).contract_with(&a, Nesting::LastFactorFirst),
            x.contract_with(&y.contract_with(&a, Nesting::LastFactorFirst), Nesting::LastFactorFirst)
        );
    }

    #[test]
    fn cartan_relations(v in arb_multivector(space(), 1), w in arb_multivector(space(), 1), a in arb_form_upto(space(), 3)) {
        // L_v d = d L_v
        prop_assert_eq!(v.lie_derivative(&a.d()), v.lie_derivative(&a).d());
        // [L_v, i_w] = i_[v,w]
        let lhs = &v.lie_derivative(&w.contract(&a)) - &w.contract(&v.lie_derivative(&a));
        prop_assert_eq!(lhs, lie_bracket(&v, &w).contract(&a));
    }
}
