//! Graded exterior algebra of differential forms and multi-vector fields.
//!
//! Both kinds share one representation, [`Graded`], a sparse map from
//! normalized basis monomials ([`Blade`]) to polynomial coefficients. The
//! variance marker keeps forms and multi-vectors apart at the type level;
//! [`GradedObject`] is the dynamically tagged version used by the parser.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::marker::PhantomData;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::Zero;

use crate::conventions::{parity, Nesting, NESTING};
use crate::error::Error;
use crate::multiphase::PhaseSpace;
use crate::scalar::{integer, Rational, Scalar};
use crate::Result;

/// Strictly increasing list of coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Blade(Vec<u16>);

impl Blade {
    pub fn empty() -> Self {
        Blade(Vec::new())
    }

    /// Sorts `indices`, returning the permutation sign, or `None` if an
    /// index repeats.
    pub fn normalize(indices: &[usize]) -> Option<(i64, Blade)> {
        let mut v: Vec<u16> = indices.iter().map(|&i| i as u16).collect();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && v[j - 1] == v[j] {
                return None;
            }
        }
        Some((sign, Blade(v)))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&i| i as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&(index as u16)).is_ok()
    }

    pub fn position(&self, index: usize) -> Option<usize> {
        self.0.binary_search(&(index as u16)).ok()
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Blade) -> Option<(i64, Blade)> {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let mut sign = 1;
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                core::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    // other[j] jumps over the remaining self[i..]
                    if (self.0.len() - i) % 2 == 1 {
                        sign = -sign;
                    }
                    out.push(other.0[j]);
                    j += 1;
                }
                core::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Some((sign, Blade(out)))
    }

    /// Removes `index`, with sign `(−1)^position`.
    pub fn remove(&self, index: usize) -> Option<(i64, Blade)> {
        let pos = self.position(index)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some((parity(pos), Blade(v)))
    }

    /// Sign and remainder of contracting the vector blade `vectors` into the
    /// covector blade `self` under the given nesting order.
    pub fn contract_by(&self, vectors: &Blade, nesting: Nesting) -> Option<(i64, Blade)> {
        let mut current = self.clone();
        let mut sign = 1;
        let mut step = |idx: u16, current: &mut Blade| -> bool {
            match current.remove(idx as usize) {
                Some((s, rest)) => {
                    sign *= s;
                    *current = rest;
                    true
                }
                None => false,
            }
        };
        let ok = match nesting {
            Nesting::FirstFactorFirst => vectors.0.iter().all(|&i| step(i, &mut current)),
            Nesting::LastFactorFirst => vectors.0.iter().rev().all(|&i| step(i, &mut current)),
        };
        ok.then_some((sign, current))
    }
}

pub trait Variance: Clone + Copy + core::fmt::Debug + PartialEq + Eq + Default + 'static {
    const CONTRAVARIANT: bool;
}

/// Marker for differential forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Co;

/// Marker for multi-vector fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Contra;

impl Variance for Co {
    const CONTRAVARIANT: bool = false;
}

impl Variance for Contra {
    const CONTRAVARIANT: bool = true;
}

/// Homogeneous element of the exterior algebra (forms or multi-vectors).
///
/// Equality ignores the nominal degree of zero objects.
#[derive(Clone, Debug)]
pub struct Graded<V: Variance> {
    space: PhaseSpace,
    degree: usize,
    terms: BTreeMap<Blade, Scalar>,
    marker: PhantomData<V>,
}

impl<V: Variance> PartialEq for Graded<V> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.terms == other.terms && (self.degree == other.degree || self.terms.is_empty())
    }
}

impl<V: Variance> Eq for Graded<V> {}

pub type Form = Graded<Co>;
pub type MultiVector = Graded<Contra>;

impl<V: Variance> Graded<V> {
    pub fn zero(space: PhaseSpace, degree: usize) -> Self {
        Graded { space, degree, terms: BTreeMap::new(), marker: PhantomData }
    }

    pub fn from_scalar(s: Scalar) -> Self {
        let mut out = Self::zero(s.space(), 0);
        out.insert(Blade::empty(), s);
        out
    }

    /// `coeff · e_{i1} ∧ … ∧ e_{ik}` for arbitrary (unsorted) indices.
    pub fn monomial(coeff: Scalar, indices: &[usize]) -> Self {
        let space = coeff.space();
        let mut out = Self::zero(space, indices.len());
        for &i in indices {
            assert!(i < space.dim(), "basis index {i} out of range");
        }
        if let Some((sign, blade)) = Blade::normalize(indices) {
            out.insert(blade, coeff.scale(&integer(sign)));
        }
        out
    }

    pub fn basis(space: PhaseSpace, indices: &[usize]) -> Self {
        Self::monomial(Scalar::one(space), indices)
    }

    pub fn from_terms<I>(space: PhaseSpace, degree: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Blade, Scalar)>,
    {
        let mut out = Self::zero(space, degree);
        for (b, s) in terms {
            assert_eq!(b.len(), degree, "blade length does not match degree");
            out.insert(b, s);
        }
        out
    }

    fn insert(&mut self, blade: Blade, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(blade) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Scalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, blade: &Blade) -> Scalar {
        self.terms.get(blade).cloned().unwrap_or_else(|| Scalar::zero(self.space))
    }

    /// Degree-0 content as a scalar (zero for higher degrees).
    pub fn as_scalar(&self) -> Scalar {
        self.coefficient(&Blade::empty())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        Ok(self - other)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::DegreeMismatch { form: self.degree, field: other.degree, expected: self.degree });
        }
        Ok(())
    }

    pub fn scaled(&self, factor: &Scalar) -> Self {
        assert_eq!(self.space, factor.space(), "scaling across spaces");
        let mut out = Self::zero(self.space, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.insert(b.clone(), c * factor);
        }
        out
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        let mut out = Self::zero(self.space, self.degree);
        if factor.is_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.insert(b.clone(), c.scale(factor));
        }
        out
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        self.scale(&integer(factor))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.space, other.space, "wedge across spaces");
        let mut out = Self::zero(self.space, self.degree + other.degree);
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                if let Some((sign, b)) = b1.wedge(b2) {
                    out.insert(b, (c1 * c2).scale(&integer(sign)));
                }
            }
        }
        out
    }

    pub fn checked_wedge(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.wedge(other))
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Self {
        let mut out = Self::zero(self.space, self.degree);
        for (b, c) in &self.terms {
            out.insert(b.clone(), f(c));
        }
        out
    }

    /// Same expression on a space that shares this one's coordinate layout
    /// as a prefix (ordinary ↔ extended).
    pub fn reinterpret(&self, target: PhaseSpace) -> Result<Self> {
        let mut out = Self::zero(target, self.degree);
        for (b, c) in &self.terms {
            if let Some(i) = b.indices().find(|&i| i >= target.dim()) {
                return Err(Error::IndexOutOfRange { index: i, len: target.dim() });
            }
            out.insert(b.clone(), c.reinterpret(target)?);
        }
        Ok(out)
    }

    /// Every basis monomial only involves spacetime directions.
    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(|b| b.indices().all(|i| self.space.is_spacetime(i)))
    }

    /// Highest polynomial degree among the coefficients in the variables
    /// accepted by `select`.
    pub fn coefficient_degree_in(&self, select: impl Fn(usize) -> bool + Copy) -> usize {
        self.terms.values().map(|c| c.degree_in(select)).max().unwrap_or(0)
    }
}

impl<V: Variance> Add for &Graded<V> {
    type Output = Graded<V>;
    fn add(self, rhs: &Graded<V>) -> Graded<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Variance> Add for Graded<V> {
    type Output = Graded<V>;
    fn add(mut self, rhs: Graded<V>) -> Graded<V> {
        self += &rhs;
        self
    }
}

impl<V: Variance> AddAssign<&Graded<V>> for Graded<V> {
    fn add_assign(&mut self, rhs: &Graded<V>) {
        assert_eq!(self.space, rhs.space, "adding across spaces");
        if rhs.is_zero() {
            return;
        }
        if self.is_zero() {
            self.degree = rhs.degree;
        }
        assert_eq!(self.degree, rhs.degree, "adding objects of different degree");
        for (b, c) in &rhs.terms {
            self.insert(b.clone(), c.clone());
        }
    }
}

impl<V: Variance> SubAssign<&Graded<V>> for Graded<V> {
    fn sub_assign(&mut self, rhs: &Graded<V>) {
        *self += &-rhs;
    }
}

impl<V: Variance> Sub for &Graded<V> {
    type Output = Graded<V>;
    fn sub(self, rhs: &Graded<V>) -> Graded<V> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<V: Variance> Sub for Graded<V> {
    type Output = Graded<V>;
    fn sub(mut self, rhs: Graded<V>) -> Graded<V> {
        self -= &rhs;
        self
    }
}

impl<V: Variance> Neg for &Graded<V> {
    type Output = Graded<V>;
    fn neg(self) -> Graded<V> {
        Graded {
            space: self.space,
            degree: self.degree,
            terms: self.terms.iter().map(|(b, c)| (b.clone(), -c)).collect(),
            marker: PhantomData,
        }
    }
}

impl<V: Variance> Neg for Graded<V> {
    type Output = Graded<V>;
    fn neg(self) -> Graded<V> {
        -&self
    }
}

impl Form {
    pub fn dx(space: PhaseSpace, index: usize) -> Form {
        Form::basis(space, &[index])
    }

    /// Differential of a function.
    pub fn differential(f: &Scalar) -> Form {
        Form::from_scalar(f.clone()).d()
    }

    /// Exterior derivative.
    pub fn d(&self) -> Form {
        self.d_along(|_| true)
    }

    /// Exterior derivative differentiating only along the coordinates
    /// accepted by `select` (the flat fibre derivative uses this).
    pub fn d_along(&self, select: impl Fn(usize) -> bool) -> Form {
        let mut out = Form::zero(self.space, self.degree + 1);
        for (blade, coeff) in &self.terms {
            for k in 0..self.space.dim() {
                if !select(k) || blade.contains(k) || !coeff.depends_on(k) {
                    continue;
                }
                let (sign, b) = Blade(alloc::vec![k as u16]).wedge(blade).unwrap();
                out.insert(b, coeff.derivative(k).scale(&integer(sign)));
            }
        }
        out
    }
}

impl MultiVector {
    pub fn partial(space: PhaseSpace, index: usize) -> MultiVector {
        MultiVector::basis(space, &[index])
    }

    /// `i(X)α` under the crate-wide nesting convention.
    pub fn contract(&self, form: &Form) -> Form {
        self.contract_with(form, NESTING)
    }

    /// Checked `i(X)α`.
    pub fn try_contract(&self, form: &Form) -> Result<Form> {
        if self.space != form.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.contract(form))
    }

    /// `i(X)α` with an explicit nesting order. A multi-vector of degree
    /// larger than the form gives the zero form of degree 0.
    pub fn contract_with(&self, form: &Form, nesting: Nesting) -> Form {
        assert_eq!(self.space, form.space, "contraction across spaces");
        if self.degree > form.degree {
            return Form::zero(self.space, 0);
        }
        let mut out = Form::zero(self.space, form.degree - self.degree);
        for (vb, vc) in &self.terms {
            for (fb, fc) in &form.terms {
                if let Some((sign, rest)) = fb.contract_by(vb, nesting) {
                    out.insert(rest, (vc * fc).scale(&integer(sign)));
                }
            }
        }
        out
    }

    /// Lie derivative `L_X α = d i(X) α − (−1)^r i(X) dα`.
    pub fn lie_derivative(&self, form: &Form) -> Form {
        let r = self.degree;
        let first = self.contract(form).d();
        let second = self.contract(&form.d());
        let out = if r.is_multiple_of(2) { &first - &second } else { &first + &second };
        if self.degree > form.degree + 1 {
            // both pieces vanish; keep the degree bookkeeping uniform
            return Form::zero(self.space, 0);
        }
        out
    }

    /// Directional derivative `v(g)` for a vector field `v`.
    pub fn apply(&self, g: &Scalar) -> Scalar {
        assert_eq!(self.degree, 1, "apply needs a vector field");
        let mut out = Scalar::zero(self.space);
        for (b, c) in &self.terms {
            let k = b.indices().next().unwrap();
            out += &(c * &g.derivative(k));
        }
        out
    }

    /// Component of a vector field along coordinate `index`.
    pub fn component(&self, index: usize) -> Scalar {
        self.coefficient(&Blade(alloc::vec![index as u16]))
    }
}

/// A form or a multi-vector field, tagged at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradedObject {
    Form(Form),
    MultiVector(MultiVector),
}

impl GradedObject {
    pub fn degree(&self) -> usize {
        match self {
            GradedObject::Form(f) => f.degree(),
            GradedObject::MultiVector(x) => x.degree(),
        }
    }

    pub fn space(&self) -> PhaseSpace {
        match self {
            GradedObject::Form(f) => f.space(),
            GradedObject::MultiVector(x) => x.space(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            GradedObject::Form(f) => f.is_zero(),
            GradedObject::MultiVector(x) => x.is_zero(),
        }
    }

    pub fn wedge(&self, other: &GradedObject) -> Result<GradedObject> {
        match (self, other) {
            (GradedObject::Form(a), GradedObject::Form(b)) => Ok(GradedObject::Form(a.checked_wedge(b)?)),
            (GradedObject::MultiVector(a), GradedObject::MultiVector(b)) => {
                Ok(GradedObject::MultiVector(a.checked_wedge(b)?))
            }
            _ => Err(Error::MixedVariance),
        }
    }

    pub fn as_form(&self) -> Option<&Form> {
        match self {
            GradedObject::Form(f) => Some(f),
            GradedObject::MultiVector(_) => None,
        }
    }

    pub fn as_multivector(&self) -> Option<&MultiVector> {
        match self {
            GradedObject::MultiVector(x) => Some(x),
            GradedObject::Form(_) => None,
        }
    }

    /// Reads the object as a form; degree-0 multi-vectors are scalars and
    /// convert.
    pub fn into_form(self) -> Result<Form> {
        match self {
            GradedObject::Form(f) => Ok(f),
            GradedObject::MultiVector(x) if x.degree() == 0 => Ok(Form::from_scalar(x.as_scalar())),
            GradedObject::MultiVector(_) => Err(Error::MixedVariance),
        }
    }

    pub fn into_multivector(self) -> Result<MultiVector> {
        match self {
            GradedObject::MultiVector(x) => Ok(x),
            GradedObject::Form(f) if f.degree() == 0 => Ok(MultiVector::from_scalar(f.as_scalar())),
            GradedObject::Form(_) => Err(Error::MixedVariance),
        }
    }
}

/// All strictly increasing index tuples of length `k` in `0..dim`.
pub fn all_blades(dim: usize, k: usize) -> Vec<Blade> {
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    let mut current: Vec<u16> = (0..k as u16).collect();
    loop {
        out.push(Blade(current.clone()));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (current[i] as usize) < dim - k + i {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Constant-coefficient check.
pub fn has_constant_coefficients<V: Variance>(x: &Graded<V>) -> bool {
    x.terms().all(|(_, c)| c.is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiphase::{Flavor, PhaseSpace};
    use crate::scalar::Coordinate;

    fn s21() -> PhaseSpace {
        PhaseSpace::new(2, 1, Flavor::Extended).unwrap()
    }

    fn idx(s: PhaseSpace, c: Coordinate) -> usize {
        s.index_of(c).unwrap()
    }

    #[test]
    fn self_wedge_vanishes() {
        let s = s21();
        let q = idx(s, Coordinate::Field(1));
        let dq = Form::dx(s, q);
        assert!(dq.wedge(&dq).is_zero());
    }

    #[test]
    fn odd_forms_anticommute() {
        let s = s21();
        let dq = Form::dx(s, idx(s, Coordinate::Field(1)));
        let dp = Form::dx(s, idx(s, Coordinate::Momentum { mu: 0, field: 1 }));
        assert_eq!(dq.wedge(&dp), -dp.wedge(&dq));
    }

    #[test]
    fn scalar_factor_passes_through() {
        let s = s21();
        let p = Scalar::coordinate(s, Coordinate::Energy).unwrap();
        let a = Form::monomial(p.clone(), &[0]);
        let b = Form::dx(s, 1);
        assert_eq!(a.wedge(&b), Form::monomial(p, &[0, 1]));
    }

    #[test]
    fn contraction_in_leading_slot() {
        let s = s21();
        let e = idx(s, Coordinate::Energy);
        let vol = Form::basis(s, &[e, 0, 1]);
        assert_eq!(MultiVector::partial(s, e).contract(&vol), Form::basis(s, &[0, 1]));
    }

    #[test]
    fn oversized_contraction_is_zero_of_degree_zero() {
        let s = s21();
        let x = MultiVector::basis(s, &[0, 1]);
        let out = x.contract(&Form::dx(s, 0));
        assert!(out.is_zero());
        assert_eq!(out.degree(), 0);
    }

    #[test]
    fn d_on_monomial_and_nilpotent() {
        let s = s21();
        let p = Scalar::coordinate(s, Coordinate::Energy).unwrap();
        let q = idx(s, Coordinate::Field(1));
        let form = Form::monomial(p, &[q]);
        let e = idx(s, Coordinate::Energy);
        assert_eq!(form.d(), Form::basis(s, &[e, q]));
        let f = Scalar::coordinate(s, Coordinate::Field(1)).unwrap().pow(3);
        assert!(Form::differential(&f).d().is_zero());
    }

    #[test]
    fn mixed_variance_wedge_rejected() {
        let s = s21();
        let a = GradedObject::Form(Form::dx(s, 0));
        let b = GradedObject::MultiVector(MultiVector::partial(s, 0));
        assert_eq!(a.wedge(&b), Err(Error::MixedVariance));
    }

    #[test]
    fn blade_enumeration() {
        assert_eq!(all_blades(4, 2).len(), 6);
        assert_eq!(all_blades(3, 0), alloc::vec![Blade::empty()]);
        assert!(all_blades(2, 3).is_empty());
        let b = all_blades(5, 3);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn normalization_sign() {
        assert_eq!(Blade::normalize(&[2, 0, 1]), Some((1, Blade(alloc::vec![0, 1, 2]))));
        assert_eq!(Blade::normalize(&[1, 0]), Some((-1, Blade(alloc::vec![0, 1]))));
        assert_eq!(Blade::normalize(&[1, 3, 1]), None);
    }
}
