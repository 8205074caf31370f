//! Schouten–Nijenhuis bracket of multi-vector fields.
//!
//! Implemented by the closed coordinate formula on monomials. For
//! `X = a ∂_I` (degree `r`) and `Y = b ∂_J` (degree `s`):
//!
//! ```text
//! [X, Y] = (−1)^{r−1} Σ_k (−1)^{k}        a ∂_{I_k} b   ∂_{I∖I_k} ∧ ∂_J
//!        −            Σ_k (−1)^{(r−1)k}   b ∂_{J_k} a   ∂_{J<k} ∧ ∂_I ∧ ∂_{J>k}
//! ```
//!
//! with 0-based positions `k`. The formula is what the derivation rule in
//! the second argument gives once `[X, ∂_j] = −(∂_j a) ∂_I` and
//! `[X, g] = (−1)^{r−1} i(dg) X` are fixed.

use alloc::vec::Vec;

use crate::conventions::parity;
use crate::exterior::{Blade, MultiVector};
use crate::scalar::{integer, Scalar};

pub fn schouten(x: &MultiVector, y: &MultiVector) -> MultiVector {
    assert_eq!(x.space(), y.space(), "Schouten bracket across spaces");
    let space = x.space();
    let (r, s) = (x.degree(), y.degree());
    let degree = (r + s).saturating_sub(1);
    let mut out = MultiVector::zero(space, degree);
    if r + s == 0 {
        return out;
    }
    for (bi, a) in x.terms() {
        for (bj, b) in y.terms() {
            out += &monomial_bracket(space, bi, a, bj, b, degree);
        }
    }
    out
}

fn monomial_bracket(
    space: crate::multiphase::PhaseSpace,
    bi: &Blade,
    a: &Scalar,
    bj: &Blade,
    b: &Scalar,
    degree: usize,
) -> MultiVector {
    let r = bi.len();
    let i: Vec<usize> = bi.indices().collect();
    let j: Vec<usize> = bj.indices().collect();
    let mut terms: Vec<(Blade, Scalar)> = Vec::new();

    for (k, &ik) in i.iter().enumerate() {
        let db = b.derivative(ik);
        if db.is_zero() {
            continue;
        }
        let mut idx: Vec<usize> = i.iter().copied().filter(|&t| t != ik).collect();
        idx.extend_from_slice(&j);
        if let Some((sign, blade)) = Blade::normalize(&idx) {
            // (−1)^{r−1} (−1)^k
            let c = parity(r + 1 + k) * sign;
            terms.push((blade, (a * &db).scale(&integer(c))));
        }
    }
    for (k, &jk) in j.iter().enumerate() {
        let da = a.derivative(jk);
        if da.is_zero() {
            continue;
        }
        let mut idx: Vec<usize> = j[..k].to_vec();
        idx.extend_from_slice(&i);
        idx.extend_from_slice(&j[k + 1..]);
        if let Some((sign, blade)) = Blade::normalize(&idx) {
            let c = -parity((r + 1) * k) * sign;
            terms.push((blade, (b * &da).scale(&integer(c))));
        }
    }
    MultiVector::from_terms(space, degree, terms)
}

/// Lie bracket of two vector fields, `[v,w]^k = v(w^k) − w(v^k)`.
pub fn lie_bracket(v: &MultiVector, w: &MultiVector) -> MultiVector {
    assert!(v.degree() == 1 && w.degree() == 1, "lie_bracket needs vector fields");
    let space = v.space();
    let mut out = MultiVector::zero(space, 1);
    for k in 0..space.dim() {
        let c = &v.apply(&w.component(k)) - &w.apply(&v.component(k));
        out += &MultiVector::monomial(c, &[k]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiphase::{Flavor, PhaseSpace};
    use crate::scalar::Coordinate;

    fn s21() -> PhaseSpace {
        PhaseSpace::new(2, 1, Flavor::Extended).unwrap()
    }

    #[test]
    fn coordinate_frame_commutes() {
        let s = s21();
        for a in 0..s.dim() {
            for b in 0..s.dim() {
                let x = MultiVector::partial(s, a);
                let y = MultiVector::partial(s, b);
                assert!(schouten(&x, &y).is_zero());
            }
        }
    }

    #[test]
    fn hand_lie_bracket() {
        let s = s21();
        let q = s.index_of(Coordinate::Field(1)).unwrap();
        let p = s.index_of(Coordinate::Energy).unwrap();
        let qs = Scalar::var(s, q);
        let ps = Scalar::var(s, p);
        let v = MultiVector::monomial(qs.clone(), &[p]);
        let w = MultiVector::monomial(ps.clone(), &[q]);
        let expect = &MultiVector::monomial(qs, &[q]) - &MultiVector::monomial(ps, &[p]);
        assert_eq!(schouten(&v, &w), expect);
        assert_eq!(lie_bracket(&v, &w), expect);
    }

    #[test]
    fn vector_on_function() {
        let s = s21();
        let q = s.index_of(Coordinate::Field(1)).unwrap();
        let g = Scalar::var(s, q).pow(2);
        let v = MultiVector::monomial(Scalar::var(s, 0), &[q]);
        let bracket = schouten(&v, &MultiVector::from_scalar(g.clone()));
        assert_eq!(bracket.as_scalar(), v.apply(&g));
    }
}
