mod common;

use common::*;
use multisym_core::conventions::{parity, shifted};
use multisym_core::schouten::{lie_bracket, schouten};
use multisym_core::{Flavor, MultiVector, PhaseSpace, Scalar};
use proptest::prelude::*;

fn space() -> PhaseSpace {
    PhaseSpace::new(2, 1, Flavor::Extended).unwrap()
}

/// A wedge word: each factor is a function (degree 0) or a vector field.
#[derive(Clone, Debug)]
struct Word(Vec<MultiVector>);

impl Word {
    fn degree(&self) -> usize {
        self.0.iter().map(MultiVector::degree).sum()
    }

    fn eval(&self, space: PhaseSpace) -> MultiVector {
        self.0.iter().fold(MultiVector::from_scalar(Scalar::one(space)), |acc, f| acc.wedge(f))
    }
}

/// `[v, w]^k = v(w^k) − w(v^k)`, from components only.
fn lie_oracle(v: &MultiVector, w: &MultiVector) -> MultiVector {
    let s = v.space();
    let mut out = MultiVector::zero(s, 1);
    for k in 0..s.dim() {
        let c = &v.apply(&w.component(k)) - &w.apply(&v.component(k));
        out += &MultiVector::monomial(c, &[k]);
    }
    out
}

fn single(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let s = a.space();
    match (a.degree(), b.degree()) {
        (1, 1) => lie_oracle(a, b),
        (1, 0) => MultiVector::from_scalar(a.apply(&b.as_scalar())),
        (0, 1) => MultiVector::from_scalar(-b.apply(&a.as_scalar())),
        _ => MultiVector::zero(s, 0),
    }
}

/// Bracket determined by the axioms alone: base cases, the derivation rule
/// in the second slot, and graded antisymmetry to move a single factor to
/// the front.
fn axiomatic(p: &Word, q: &Word, space: PhaseSpace) -> MultiVector {
    let (pd, qd) = (p.degree() as i64, q.degree() as i64);
    if q.0.is_empty() || p.0.is_empty() {
        return MultiVector::zero(space, 0);
    }
    if q.0.len() >= 2 {
        let q1 = Word(vec![q.0[0].clone()]);
        let rest = Word(q.0[1..].to_vec());
        let q1d = q1.degree() as i64;
        let first = axiomatic(p, &q1, space).wedge(&rest.eval(space));
        let second = q1.eval(space).wedge(&axiomatic(p, &rest, space));
        let sign = if ((pd - 1) * q1d).rem_euclid(2) == 0 { 1 } else { -1 };
        return &first + &second.scale_int(sign);
    }
    if p.0.len() == 1 {
        return single(&p.0[0], &q.0[0]);
    }
    // [P, Q] = −(−1)^{(p−1)(q−1)} [Q, P]
    let sign = if ((pd - 1) * (qd - 1)).rem_euclid(2) == 0 { -1 } else { 1 };
    axiomatic(q, p, space).scale_int(sign)
}

fn arb_word(max_vectors: usize) -> impl Strategy<Value = Word> {
    let s = space();
    (arb_scalar(s, 2, 2), prop::collection::vec(arb_multivector(s, 1), 0..=max_vectors)).prop_map(move |(g, vs)| {
        let mut f = vec![MultiVector::from_scalar(g)];
        f.extend(vs);
        Word(f)
    })
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn closed_form_matches_axioms(p in arb_word(3), q in arb_word(3)) {
        let s = space();
        let expect = axiomatic(&p, &q, s);
        prop_assert_eq!(schouten(&p.eval(s), &q.eval(s)), expect);
    }

    #[test]
    fn lie_bracket_matches_components(v in arb_multivector(space(), 1), w in arb_multivector(space(), 1)) {
        prop_assert_eq!(lie_bracket(&v, &w), lie_oracle(&v, &w));
    }

    #[test]
    fn graded_antisymmetry(x in arb_multivector_upto(space(), 3), y in arb_multivector_upto(space(), 3)) {
        let (r, s) = (x.degree(), y.degree());
        prop_assert_eq!(schouten(&y, &x), schouten(&x, &y).scale_int(-shifted(r, s)));
    }

    #[test]
    fn derivation_in_second_slot(
        x in arb_multivector_upto(space(), 2),
        y in arb_multivector_upto(space(), 2),
        z in arb_multivector_upto(space(), 2),
    ) {
        let (r, s) = (x.degree(), y.degree());
        let lhs = schouten(&x, &y.wedge(&z));
        let rhs = &schouten(&x, &y).wedge(&z) + &y.wedge(&schouten(&x, &z)).scale_int(parity((r + 1) * s));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn graded_jacobi(
        x in arb_multivector_upto(space(), 3),
        y in arb_multivector_upto(space(), 3),
        z in arb_multivector_upto(space(), 3),
    ) {
        let (r, s, t) = (x.degree(), y.degree(), z.degree());
        let a = schouten(&x, &schouten(&y, &z)).scale_int(shifted(r, t));
        let b = schouten(&y, &schouten(&z, &x)).scale_int(shifted(s, r));
        let c = schouten(&z, &schouten(&x, &y)).scale_int(shifted(t, s));
        prop_assert!((&(&a + &b) + &c).is_zero());
    }

    #[test]
    fn lie_derivative_of_bracket(
        x in arb_multivector_upto(space(), 2),
        y in arb_multivector_upto(space(), 2),
        f in arb_form_upto(space(), 3),
    ) {
        let (r, s) = (x.degree(), y.degree());
        let lhs = schouten(&x, &y).lie_derivative(&f);
        let rhs = &x.lie_derivative(&y.lie_derivative(&f)).scale_int(shifted(r, s))
            - &y.lie_derivative(&x.lie_derivative(&f));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn function_brackets() {
    let s = space();
    let g = Scalar::var(s, 2);
    let h = Scalar::var(s, 3);
    let gf = MultiVector::from_scalar(g.clone());
    assert!(schouten(&gf, &MultiVector::from_scalar(h)).is_zero());
    let v = MultiVector::monomial(Scalar::var(s, 0), &[2]);
    assert_eq!(schouten(&v, &gf), MultiVector::from_scalar(Scalar::var(s, 0)));
    assert_eq!(schouten(&gf, &v), MultiVector::from_scalar(-Scalar::var(s, 0)));
}
