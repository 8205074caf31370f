mod common;

use common::fixtures::*;
use common::*;
use multisym_core::conventions::{parity, Nesting};
use multisym_core::hamiltonian::HamiltonianPair;
use multisym_core::scalar::Rational;
use multisym_core::{Flavor, Form, MultiVector, Multiphase, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;

#[test]
fn both_bracket_formulas_agree() {
    for (n, nf) in [(2, 1), (3, 1)] {
        let m = Multiphase::new(n, nf).unwrap();
        let ps = poisson_pairs(&m);
        for f in &ps {
            for g in &ps {
                let a = m.poisson_bracket(f, g).unwrap().value;
                let b = m.poisson_bracket_alt(f, g).unwrap().value;
                assert_eq!(a, b, "r={} s={}", f.r(), g.r());
            }
        }
    }
}

/// The second formula with its leading term written `i(X_g) i(X_f) ω`.
fn reversed_leading_term(m: &Multiphase, f: &HamiltonianPair, g: &HamiltonianPair) -> Form {
    let head = g.field().contract(&f.field().contract(m.omega())).scale_int(parity(f.r()));
    &head + &m.bracket_correction_potential(f, g).d()
}

#[test]
fn reversed_leading_term_fails_for_odd_degrees() {
    let m = Multiphase::new(2, 1).unwrap();
    let ps = poisson_pairs(&m);
    let mut failures = 0;
    for f in &ps {
        for g in &ps {
            let main = m.poisson_bracket(f, g).unwrap().value;
            let reversed = reversed_leading_term(&m, f, g);
            if f.r() % 2 == 1 && g.r() % 2 == 1 {
                let primed = m.primed_bracket(f, g).unwrap().value;
                assert_eq!(main == reversed, primed.is_zero());
                failures += usize::from(main != reversed);
            } else {
                assert_eq!(main, reversed);
            }
        }
    }
    assert!(failures > 0);
}

#[test]
fn momentum_map_through_euler_field() {
    for (n, nf) in [(1, 1), (2, 1), (3, 1), (2, 2)] {
        let m = Multiphase::new(n, nf).unwrap();
        for x in exact_fields(&m) {
            let via_sigma = x.wedge(m.sigma()).contract(m.omega());
            assert_eq!(m.j_form(&x), via_sigma);
            // the (−1)^r normalization is off by a sign wherever J ≠ 0
            let minus = x.contract(m.theta()).scale_int(parity(x.degree()));
            assert_eq!(minus == via_sigma, via_sigma.is_zero());
        }
    }
}

#[test]
fn other_nesting_breaks_the_euler_identity() {
    let m = Multiphase::new(2, 1).unwrap();
    let mut broken = 0;
    for x in exact_fields(&m).into_iter().filter(|x| x.degree() == 1) {
        let nest = Nesting::LastFactorFirst;
        let j = x.contract_with(m.theta(), nest);
        let via_sigma = x.wedge(m.sigma()).contract_with(m.omega(), nest);
        if j != via_sigma {
            broken += 1;
        }
    }
    assert!(broken > 0);
}

// Extended mechanics: coordinates (t, q, P, E) with ω = dq∧dP − dE∧dt.

fn rational_inverse(mut a: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular");
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for j in 0..n {
                    let (x, y) = (&a[col][j] * &factor, &inv[col][j] * &factor);
                    a[r][j] -= x;
                    inv[r][j] -= y;
                }
            }
        }
    }
    inv
}

/// `X_f` from `X^a ω_{ab} = ∂_b f` by inverting the matrix of `ω`.
fn oracle_field(m: &Multiphase, f: &Scalar) -> Vec<Scalar> {
    let s = m.extended();
    let dim = s.dim();
    let mut w = vec![vec![Rational::zero(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let pair = MultiVector::basis(s, &[b]).contract(&MultiVector::basis(s, &[a]).contract(m.omega()));
            w[a][b] = pair.as_scalar().constant_term();
        }
    }
    let inv = rational_inverse(w);
    (0..dim)
        .map(|a| {
            let mut x = Scalar::zero(s);
            for b in 0..dim {
                x += &f.derivative(b).scale(&inv[b][a]);
            }
            x
        })
        .collect()
}

fn mechanics() -> Multiphase {
    Multiphase::new(1, 1).unwrap()
}

proptest! {
    #![proptest_config(config(40))]

    #[test]
    fn mechanics_bracket_matches_symplectic_inversion(
        f in arb_scalar(mechanics().extended(), 3, 3),
        g in arb_scalar(mechanics().extended(), 3, 3),
    ) {
        let m = mechanics();
        let s = m.extended();
        let pf = m.solve_hamiltonian(&Form::from_scalar(f.clone())).unwrap();
        let pg = m.solve_hamiltonian(&Form::from_scalar(g.clone())).unwrap();
        let xf = oracle_field(&m, &f);
        for (k, c) in xf.iter().enumerate() {
            prop_assert_eq!(&pf.field().component(k), c);
        }
        let bracket = m.poisson_bracket(&pf, &pg).unwrap().value;
        let mut oracle = Scalar::zero(s);
        for (k, c) in xf.iter().enumerate() {
            oracle -= &(c * &g.derivative(k));
        }
        prop_assert_eq!(&bracket, &Form::from_scalar(oracle));
        // classical bracket of extended mechanics, with t = x⁰ and E = p
        let (t, q, pm, e) = (0, s.q(1), s.momentum(0, 1), s.energy().unwrap());
        let d = |h: &Scalar, k| h.derivative(k);
        let classical = &(&(&d(&f, q) * &d(&g, pm)) - &(&d(&f, pm) * &d(&g, q)))
            + &(&(&d(&f, t) * &d(&g, e)) - &(&d(&f, e) * &d(&g, t)));
        prop_assert_eq!(bracket, Form::from_scalar(classical));
    }
}

#[test]
fn mechanics_space_layout() {
    let m = mechanics();
    let s = m.extended();
    assert_eq!(s.flavor(), Flavor::Extended);
    assert_eq!(s.dim(), 4);
    let expect = &Form::basis(s, &[s.q(1), s.momentum(0, 1)]) - &Form::basis(s, &[s.energy().unwrap(), 0]);
    assert_eq!(m.omega(), &expect);
}
