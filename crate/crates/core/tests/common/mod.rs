#![allow(dead_code)]

use multisym_core::exterior::{Graded, Variance};
use multisym_core::scalar::{integer, Monomial};
use multisym_core::{Blade, Form, MultiVector, PhaseSpace, Scalar};
use proptest::prelude::*;

pub fn arb_scalar(space: PhaseSpace, max_terms: usize, max_degree: u16) -> impl Strategy<Value = Scalar> {
    let dim = space.dim();
    prop::collection::vec(
        (prop::collection::vec(0..=max_degree, dim), prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])),
        1..=max_terms.max(1),
    )
    .prop_map(move |terms| {
        Scalar::from_terms(
            space,
            terms.into_iter().filter_map(|(mut e, c)| {
                // cap the total degree
                while e.iter().sum::<u16>() > max_degree {
                    let i = e.iter().position(|&k| k > 0).unwrap();
                    e[i] -= 1;
                }
                Some((Monomial::from_exponents(e), integer(c)))
            }),
        )
    })
}

fn arb_graded<V: Variance>(space: PhaseSpace, k: usize, max_terms: usize) -> impl Strategy<Value = Graded<V>> {
    let dim = space.dim();
    prop::collection::vec(
        (prop::sample::subsequence((0..dim).collect::<Vec<_>>(), k), arb_scalar(space, 2, 2)),
        1..=max_terms,
    )
    .prop_map(move |terms| {
        Graded::from_terms(space, k, terms.into_iter().map(|(idx, c)| (Blade::normalize(&idx).unwrap().1, c)))
    })
}

pub fn arb_form(space: PhaseSpace, k: usize) -> impl Strategy<Value = Form> {
    arb_graded(space, k, 3)
}

pub fn arb_multivector(space: PhaseSpace, k: usize) -> impl Strategy<Value = MultiVector> {
    arb_graded(space, k, 3)
}

pub fn arb_multivector_upto(space: PhaseSpace, max_k: usize) -> impl Strategy<Value = MultiVector> {
    (0..=max_k).prop_flat_map(move |k| arb_multivector(space, k))
}

pub fn arb_form_upto(space: PhaseSpace, max_k: usize) -> impl Strategy<Value = Form> {
    (0..=max_k).prop_flat_map(move |k| arb_form(space, k))
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

pub mod fixtures {
    use multisym_core::hamiltonian::HamiltonianPair;
    use multisym_core::multiphase::horizontal_volume;
    use multisym_core::{Form, MultiVector, Multiphase, PhaseSpace, Scalar};

    pub fn var(s: PhaseSpace, i: usize) -> Scalar {
        Scalar::var(s, i)
    }

    /// Projectable vector fields exercising constant, linear and quadratic
    /// coefficients.
    pub fn projectable_fields(m: &Multiphase) -> Vec<MultiVector> {
        let s = m.extended();
        let n = m.n();
        let q = s.q(1);
        let mut out: Vec<MultiVector> = (0..n).map(|mu| MultiVector::partial(s, mu)).collect();
        out.push(MultiVector::partial(s, q));
        out.push(MultiVector::monomial(var(s, q), &[q]));
        let x1 = (n - 1).min(1);
        out.push(MultiVector::monomial(var(s, x1), &[0]));
        out.push(MultiVector::monomial(&var(s, q) * &var(s, q), &[q]));
        out.push(MultiVector::monomial(&var(s, 0) * &var(s, q), &[q]));
        out.push(MultiVector::monomial(&var(s, 0) * &var(s, 0), &[x1]));
        out
    }

    /// Exact fields: canonical lifts and the exact wedges among them.
    pub fn exact_fields(m: &Multiphase) -> Vec<MultiVector> {
        let lifts: Vec<MultiVector> = projectable_fields(m).iter().map(|x| m.canonical_lift(x).unwrap()).collect();
        let mut out = lifts.clone();
        for i in 0..lifts.len() {
            for j in i + 1..lifts.len() {
                let w = lifts[i].wedge(&lifts[j]);
                if !w.is_zero() && m.is_exact(&w) {
                    out.push(w);
                }
            }
        }
        if m.n() >= 3 {
            let w = lifts[0].wedge(&lifts[1]).wedge(&lifts[2]);
            out.push(w);
        }
        out
    }

    /// Poisson pairs from every example family.
    pub fn poisson_pairs(m: &Multiphase) -> Vec<HamiltonianPair> {
        let s = m.extended();
        let n = m.n();
        let q = s.q(1);
        let mut out: Vec<HamiltonianPair> = exact_fields(m).iter().map(|x| m.exact_pair(x).unwrap()).collect();
        let mut h = &var(s, q) * &var(s, q);
        for mu in 0..n {
            let p = var(s, s.momentum(mu, 1));
            h = &h + &(&p * &p);
        }
        out.push(m.dw_hamiltonian_form(&h).unwrap().pair);
        out.push(m.solve_hamiltonian(&Form::from_scalar(&var(s, q) * &var(s, s.momentum(0, 1)))).unwrap());
        for f in kanatchikov_forms(m) {
            let f = multisym_core::multiphase::pullback_horizontal(&f).unwrap();
            out.push(m.solve_hamiltonian(&f).unwrap());
        }
        out
    }

    /// Horizontal forms `F^μ d^n x_μ` with `F^μ = p^μ K + L^μ`, and a few
    /// horizontal functions, on the ordinary space.
    pub fn kanatchikov_forms(m: &Multiphase) -> Vec<Form> {
        let o = m.ordinary();
        let n = m.n();
        let q = o.q(1);
        let ks = [var(o, q), &var(o, q) * &var(o, 0), Scalar::one(o), &var(o, q) * &var(o, q)];
        let ls = [var(o, 0), &var(o, 1 % n) * &var(o, q), Scalar::zero(o), Scalar::from_int(o, 2)];
        let mut out = Vec::new();
        for (i, k) in ks.iter().enumerate() {
            let mut f = Form::zero(o, n - 1);
            for mu in 0..n {
                let c = &(&var(o, o.momentum(mu, 1)) * k) + &ls[(i + mu) % ls.len()];
                f += &horizontal_volume(o, Some(mu)).unwrap().scaled(&c);
            }
            out.push(f);
        }
        out.push(Form::from_scalar(&var(o, o.momentum(0, 1)) * &var(o, q)));
        out.push(Form::from_scalar(var(o, q)));
        out
    }
}
