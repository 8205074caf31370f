//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Scalar`] is tied to a [`PhaseSpace`]; the space fixes the number and
//! order of the coordinate symbols. Terms are kept in a `BTreeMap` keyed by
//! the dense exponent vector, so structural equality is mathematical
//! equality.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::multiphase::PhaseSpace;
use crate::Result;

pub type Rational = BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// One coordinate symbol of a multiphase space.
///
/// Field indices are 1-based and spacetime indices 0-based, matching the
/// usual `x^μ, q^i, p^μ_i` notation. On a jet space the `Momentum` slot holds
/// the velocity `v^i_μ = ∂_μ φ^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coordinate {
    Spacetime(usize),
    Field(usize),
    Momentum { mu: usize, field: usize },
    Energy,
}

/// Expression-language name: `x[μ]`, `q[i]`, `p[μ,i]` or `pp`.
impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coordinate::Spacetime(mu) => write!(f, "x[{mu}]"),
            Coordinate::Field(i) => write!(f, "q[{i}]"),
            Coordinate::Momentum { mu, field } => write!(f, "p[{mu},{field}]"),
            Coordinate::Energy => write!(f, "pp"),
        }
    }
}

/// Dense exponent vector, one entry per coordinate of the owning space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u16]>);

impl Monomial {
    pub fn one(dim: usize) -> Self {
        Monomial(vec![0; dim].into_boxed_slice())
    }

    pub fn var(dim: usize, index: usize) -> Self {
        let mut e = vec![0; dim];
        e[index] = 1;
        Monomial(e.into_boxed_slice())
    }

    pub fn from_exponents(exponents: Vec<u16>) -> Self {
        Monomial(exponents.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u16 {
        self.0[index]
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `∂/∂(var index)` of the monomial: `(exponent, lowered monomial)`.
    fn derivative(&self, index: usize) -> Option<(u16, Monomial)> {
        let e = self.0[index];
        if e == 0 {
            return None;
        }
        let mut lowered = self.0.clone();
        lowered[index] -= 1;
        Some((e, Monomial(lowered)))
    }
}

// Graded order would print nicer, but lexicographic on the exponent vector
// is what "global coordinate order" means here and it is cheap to compare.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    space: PhaseSpace,
    terms: BTreeMap<Monomial, Rational>,
}

impl Scalar {
    pub fn zero(space: PhaseSpace) -> Self {
        Scalar { space, terms: BTreeMap::new() }
    }

    pub fn one(space: PhaseSpace) -> Self {
        Self::constant(space, Rational::one())
    }

    pub fn constant(space: PhaseSpace, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::one(space.dim()), value);
        }
        Scalar { space, terms }
    }

    pub fn from_int(space: PhaseSpace, value: i64) -> Self {
        Self::constant(space, integer(value))
    }

    /// The coordinate function with global index `index`.
    pub fn var(space: PhaseSpace, index: usize) -> Self {
        assert!(index < space.dim(), "coordinate index {index} out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(space.dim(), index), Rational::one());
        Scalar { space, terms }
    }

    pub fn coordinate(space: PhaseSpace, c: Coordinate) -> Result<Self> {
        Ok(Self::var(space, space.index_of(c)?))
    }

    /// Builds a polynomial from raw `(exponents, coefficient)` pairs,
    /// collecting like terms.
    pub fn from_terms<I>(space: PhaseSpace, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut out = Scalar::zero(space);
        for (m, c) in terms {
            assert_eq!(m.0.len(), space.dim(), "monomial length does not match space");
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.space.dim())).cloned().unwrap_or_else(Rational::zero)
    }

    /// The polynomial as a rational constant, when it is one.
    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_space(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_space(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_space(other)?;
        Ok(self * other)
    }

    fn same_space(&self, other: &Scalar) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn scale(&self, factor: &Rational) -> Scalar {
        if factor.is_zero() {
            return Scalar::zero(self.space);
        }
        Scalar { space: self.space, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * factor)).collect() }
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one(self.space);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to the coordinate with global
    /// index `index`.
    pub fn derivative(&self, index: usize) -> Scalar {
        let mut out = Scalar::zero(self.space);
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.derivative(index) {
                out.add_term(lowered, c * integer(i64::from(e)));
            }
        }
        out
    }

    pub fn partial(&self, c: Coordinate) -> Result<Scalar> {
        Ok(self.derivative(self.space.index_of(c)?))
    }

    pub fn depends_on(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(index) > 0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Highest total degree in the variables selected by `select`.
    pub fn degree_in(&self, select: impl Fn(usize) -> bool) -> usize {
        self.terms
            .keys()
            .map(|m| {
                m.exponents().iter().enumerate().filter(|(i, _)| select(*i)).map(|(_, &e)| e as usize).sum::<usize>()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn evaluate(&self, point: &BTreeMap<Coordinate, Rational>) -> Result<Rational> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.space.dim()];
        for (c, v) in point {
            if let Ok(i) = self.space.index_of(*c) {
                values[i] = Some(v);
            }
        }
        let mut acc = Rational::zero();
        for (m, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = values[i].ok_or(Error::MissingAssignment(self.space.coordinate(i)))?;
                term *= num_traits::pow(v.clone(), e as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Replaces the coordinate `index` by `value` (polynomial composition).
    pub fn substitute(&self, index: usize, value: &Scalar) -> Scalar {
        assert_eq!(self.space, value.space, "substitution across spaces");
        let mut powers: Vec<Scalar> = vec![Scalar::one(self.space)];
        let mut out = Scalar::zero(self.space);
        for (m, c) in &self.terms {
            let e = m.exponent(index) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = m.0.clone();
            rest[index] = 0;
            let rest = Scalar { space: self.space, terms: core::iter::once((Monomial(rest), c.clone())).collect() };
            out += &(&rest * &powers[e]);
        }
        out
    }

    /// Simultaneous substitution of several coordinates.
    pub fn substitute_all(&self, values: &BTreeMap<usize, Scalar>) -> Scalar {
        let mut out = Scalar::zero(self.space);
        for (m, c) in &self.terms {
            let mut term = Scalar::constant(self.space, c.clone());
            let mut kept = m.0.clone();
            for (&index, value) in values {
                let e = m.exponent(index);
                if e > 0 {
                    kept[index] = 0;
                    term = &term * &value.pow(u32::from(e));
                }
            }
            let kept =
                Scalar { space: self.space, terms: core::iter::once((Monomial(kept), Rational::one())).collect() };
            out += &(&term * &kept);
        }
        out
    }

    /// Reads the same polynomial on another space whose first coordinates
    /// share this space's layout (e.g. ordinary ↔ extended).
    pub fn reinterpret(&self, target: PhaseSpace) -> Result<Scalar> {
        let dim = target.dim();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u16; dim];
            for (i, &k) in m.exponents().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, len: dim });
                }
                e[i] = k;
            }
            terms.insert(Monomial(e.into_boxed_slice()), c.clone());
        }
        Ok(Scalar { space: target, terms })
    }

    pub fn max_abs_coefficient(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        assert_eq!(self.space, rhs.space, "adding scalars on different spaces");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        assert_eq!(self.space, rhs.space, "subtracting scalars on different spaces");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        assert_eq!(self.space, rhs.space, "multiplying scalars on different spaces");
        let mut out = Scalar::zero(self.space);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { space: self.space, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiphase::{Flavor, PhaseSpace};

    fn p21() -> PhaseSpace {
        PhaseSpace::new(2, 1, Flavor::Extended).unwrap()
    }

    fn c(space: PhaseSpace, c: Coordinate) -> Scalar {
        Scalar::coordinate(space, c).unwrap()
    }

    #[test]
    fn like_terms_collect() {
        let s = p21();
        let p = c(s, Coordinate::Energy);
        assert_eq!(&p + &p, p.scale(&integer(2)));
    }

    #[test]
    fn zero_annihilates() {
        let s = p21();
        let q = c(s, Coordinate::Field(1));
        assert!((&q * &Scalar::zero(s)).is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let s = p21();
        let q = c(s, Coordinate::Field(1));
        let p = c(s, Coordinate::Energy);
        let lhs = &(&q + &p) * &(&q - &p);
        let rhs = &(&q * &q) - &(&p * &p);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mismatched_spaces_rejected() {
        let a = Scalar::one(p21());
        let b = Scalar::one(PhaseSpace::new(2, 1, Flavor::Ordinary).unwrap());
        assert_eq!(a.checked_add(&b), Err(Error::SpaceMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::SpaceMismatch));
    }

    #[test]
    fn partials() {
        let s = p21();
        let q = c(s, Coordinate::Field(1));
        let p = c(s, Coordinate::Energy);
        let p01 = c(s, Coordinate::Momentum { mu: 0, field: 1 });
        assert_eq!((&p * &q).partial(Coordinate::Field(1)).unwrap(), p);
        assert!(Scalar::from_int(s, 7).partial(Coordinate::Energy).unwrap().is_zero());
        assert_eq!((&p01 * &p01).partial(Coordinate::Momentum { mu: 0, field: 1 }).unwrap(), p01.scale(&integer(2)));
        assert!(matches!(p.partial(Coordinate::Field(2)), Err(Error::UnknownCoordinate(Coordinate::Field(2)))));
    }

    #[test]
    fn evaluation() {
        let s = p21();
        let q = c(s, Coordinate::Field(1));
        let p = c(s, Coordinate::Energy);
        let mut pt = BTreeMap::new();
        pt.insert(Coordinate::Energy, integer(1));
        pt.insert(Coordinate::Field(1), integer(2));
        assert_eq!((&p + &q).evaluate(&pt).unwrap(), integer(3));
        assert_eq!(Scalar::zero(s).evaluate(&BTreeMap::new()).unwrap(), integer(0));
        let mut pt = BTreeMap::new();
        pt.insert(Coordinate::Field(1), integer(3));
        pt.insert(Coordinate::Energy, integer(2));
        assert_eq!((&(&q * &q) * &p).evaluate(&pt).unwrap(), integer(18));
        pt.remove(&Coordinate::Energy);
        assert_eq!(p.evaluate(&pt), Err(Error::MissingAssignment(Coordinate::Energy)));
    }

    #[test]
    fn substitution_composes() {
        let s = p21();
        let q = c(s, Coordinate::Field(1));
        let p = c(s, Coordinate::Energy);
        let poly = &(&q * &q) + &p;
        let qi = s.index_of(Coordinate::Field(1)).unwrap();
        let sub = poly.substitute(qi, &(&p + &Scalar::one(s)));
        let expect = &(&(&p * &p) + &p.scale(&integer(3))) + &Scalar::one(s);
        assert_eq!(sub, expect);
    }
}
