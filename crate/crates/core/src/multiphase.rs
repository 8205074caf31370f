//! Extended and ordinary multiphase spaces and their canonical structures.
//!
//! Coordinates are global (trivial bundles) and ordered
//! `x⁰ … x^{n−1}, q¹ … q^N, p⁰₁ … p^{n−1}₁, …, p⁰_N … p^{n−1}_N, p`.
//! The ordinary space drops the trailing `p`, so every object on the
//! ordinary space can be read on the extended space without renumbering.

use alloc::vec::Vec;

use crate::error::Error;
use crate::exterior::{Blade, Form, MultiVector};
use crate::hamiltonian::ContractionSolver;
use crate::scalar::{integer, Coordinate, Scalar};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    /// `(x^μ, q^i, p^μ_i, p)`.
    Extended,
    /// `(x^μ, q^i, p^μ_i)`.
    Ordinary,
    /// First-jet coordinates `(x^μ, φ^i, v^i_μ)`; same layout as `Ordinary`.
    Jet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseSpace {
    n: usize,
    fields: usize,
    flavor: Flavor,
}

impl PhaseSpace {
    pub fn new(n: usize, fields: usize, flavor: Flavor) -> Result<Self> {
        if n == 0 || fields == 0 {
            return Err(Error::InvalidDimensions { n, fields });
        }
        Ok(PhaseSpace { n, fields, flavor })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fields(&self) -> usize {
        self.fields
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn with_flavor(&self, flavor: Flavor) -> PhaseSpace {
        PhaseSpace { flavor, ..*self }
    }

    pub fn dim(&self) -> usize {
        let base = self.n + self.fields + self.n * self.fields;
        match self.flavor {
            Flavor::Extended => base + 1,
            Flavor::Ordinary | Flavor::Jet => base,
        }
    }

    pub fn index_of(&self, c: Coordinate) -> Result<usize> {
        let (n, nf) = (self.n, self.fields);
        match c {
            Coordinate::Spacetime(mu) if mu < n => Ok(mu),
            Coordinate::Field(i) if (1..=nf).contains(&i) => Ok(n + i - 1),
            Coordinate::Momentum { mu, field } if mu < n && (1..=nf).contains(&field) => {
                Ok(n + nf + (field - 1) * n + mu)
            }
            Coordinate::Energy if self.flavor == Flavor::Extended => Ok(n + nf + n * nf),
            _ => Err(Error::UnknownCoordinate(c)),
        }
    }

    pub fn coordinate(&self, index: usize) -> Coordinate {
        let (n, nf) = (self.n, self.fields);
        assert!(index < self.dim(), "coordinate index {index} out of range");
        if index < n {
            Coordinate::Spacetime(index)
        } else if index < n + nf {
            Coordinate::Field(index - n + 1)
        } else if index < n + nf + n * nf {
            let k = index - n - nf;
            Coordinate::Momentum { mu: k % n, field: k / n + 1 }
        } else {
            Coordinate::Energy
        }
    }

    pub fn x(&self, mu: usize) -> usize {
        assert!(mu < self.n);
        mu
    }

    pub fn q(&self, field: usize) -> usize {
        assert!((1..=self.fields).contains(&field));
        self.n + field - 1
    }

    pub fn momentum(&self, mu: usize, field: usize) -> usize {
        assert!(mu < self.n && (1..=self.fields).contains(&field));
        self.n + self.fields + (field - 1) * self.n + mu
    }

    pub fn energy(&self) -> Option<usize> {
        (self.flavor == Flavor::Extended).then(|| self.n + self.fields + self.n * self.fields)
    }

    pub fn is_spacetime(&self, index: usize) -> bool {
        index < self.n
    }

    pub fn is_field(&self, index: usize) -> bool {
        (self.n..self.n + self.fields).contains(&index)
    }

    pub fn is_momentum(&self, index: usize) -> bool {
        let start = self.n + self.fields;
        (start..start + self.n * self.fields).contains(&index)
    }

    pub fn is_energy(&self, index: usize) -> bool {
        Some(index) == self.energy()
    }

    /// Fibre coordinate of the projection onto spacetime.
    pub fn is_fibre(&self, index: usize) -> bool {
        index >= self.n && index < self.dim()
    }

    fn require(&self, flavor: Flavor) -> Result<()> {
        if self.flavor == flavor {
            Ok(())
        } else {
            Err(Error::WrongFlavor { expected: flavor, found: self.flavor })
        }
    }
}

pub fn build_phase_space(n: usize, fields: usize, flavor: Flavor) -> Result<PhaseSpace> {
    PhaseSpace::new(n, fields, flavor)
}

/// Signature used by the Hodge star on the spacetime block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Metric {
    #[default]
    Euclidean,
    /// `(−, +, …, +)`.
    Lorentzian,
}

impl Metric {
    pub fn diagonal(&self, mu: usize) -> i64 {
        match (self, mu) {
            (Metric::Lorentzian, 0) => -1,
            _ => 1,
        }
    }
}

/// `d^n x`, or `d^n x_μ = i(∂_μ) d^n x` when `omit` is given.
pub fn horizontal_volume(space: PhaseSpace, omit: Option<usize>) -> Result<Form> {
    let n = space.n();
    let all: Vec<usize> = (0..n).collect();
    let volume = Form::basis(space, &all);
    match omit {
        None => Ok(volume),
        Some(mu) if mu < n => Ok(MultiVector::partial(space, mu).contract(&volume)),
        Some(mu) => Err(Error::IndexOutOfRange { index: mu, len: n }),
    }
}

/// `p^μ_i dq^i ∧ d^n x_μ` on either flavor.
fn theta_momentum_part(space: PhaseSpace) -> Form {
    let mut out = Form::zero(space, space.n());
    for i in 1..=space.fields() {
        let dq = Form::dx(space, space.q(i));
        for mu in 0..space.n() {
            let p = Scalar::var(space, space.momentum(mu, i));
            let vol_mu = horizontal_volume(space, Some(mu)).unwrap();
            out += &dq.wedge(&vol_mu).scaled(&p);
        }
    }
    out
}

/// `dq^i ∧ dp^μ_i ∧ d^n x_μ` on either flavor.
fn omega_momentum_part(space: PhaseSpace) -> Form {
    let mut out = Form::zero(space, space.n() + 1);
    for i in 1..=space.fields() {
        let dq = Form::dx(space, space.q(i));
        for mu in 0..space.n() {
            let dp = Form::dx(space, space.momentum(mu, i));
            let vol_mu = horizontal_volume(space, Some(mu)).unwrap();
            out += &dq.wedge(&dp).wedge(&vol_mu);
        }
    }
    out
}

/// Multicanonical form `θ = p^μ_i dq^i ∧ d^n x_μ + p d^n x`.
pub fn theta(space: PhaseSpace) -> Result<Form> {
    space.require(Flavor::Extended)?;
    let e = space.energy().unwrap();
    let vol = horizontal_volume(space, None)?;
    Ok(&theta_momentum_part(space) + &vol.scaled(&Scalar::var(space, e)))
}

/// Multisymplectic form `ω = dq^i ∧ dp^μ_i ∧ d^n x_μ − dp ∧ d^n x`.
pub fn omega(space: PhaseSpace) -> Result<Form> {
    space.require(Flavor::Extended)?;
    let e = space.energy().unwrap();
    let vol = horizontal_volume(space, None)?;
    Ok(&omega_momentum_part(space) - &Form::dx(space, e).wedge(&vol))
}

/// Euler field `Σ = p^μ_i ∂/∂p^μ_i + p ∂/∂p`.
pub fn euler_field(space: PhaseSpace) -> Result<MultiVector> {
    space.require(Flavor::Extended)?;
    let mut out = MultiVector::zero(space, 1);
    for k in 0..space.dim() {
        if space.is_momentum(k) || space.is_energy(k) {
            out += &MultiVector::monomial(Scalar::var(space, k), &[k]);
        }
    }
    Ok(out)
}

/// Fibre derivative `d^V` on the ordinary space (flat connection): only the
/// `q` and `p^μ_i` directions are differentiated.
pub fn vertical_derivative(form: &Form) -> Result<Form> {
    let space = form.space();
    space.require(Flavor::Ordinary)?;
    Ok(form.d_along(|k| space.is_fibre(k)))
}

/// `(θ^V, ω^V)` on the ordinary space.
pub fn ordinary_structures(space: PhaseSpace) -> Result<(Form, Form)> {
    space.require(Flavor::Ordinary)?;
    Ok((theta_momentum_part(space), omega_momentum_part(space)))
}

/// Pullback of a horizontal form along `P → P̃`.
pub fn pullback_horizontal(form: &Form) -> Result<Form> {
    let space = form.space();
    space.require(Flavor::Ordinary)?;
    if !form.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    form.reinterpret(space.with_flavor(Flavor::Extended))
}

/// Inverse of [`pullback_horizontal`] on its image: horizontal forms on the
/// extended space that do not involve `p`.
pub fn project_horizontal(form: &Form) -> Result<Form> {
    let space = form.space();
    space.require(Flavor::Extended)?;
    if !form.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    let e = space.energy().unwrap();
    if form.terms().any(|(_, c)| c.depends_on(e)) {
        return Err(Error::NotHorizontal);
    }
    form.reinterpret(space.with_flavor(Flavor::Ordinary))
}

/// `∗dx^I = ε(I, I^c) (Π_{μ∈I} g^{μμ}) dx^{I^c}`.
fn hodge_blade(n: usize, blade: &Blade, metric: Metric) -> (i64, Vec<usize>) {
    let inside: Vec<usize> = blade.indices().collect();
    let complement: Vec<usize> = (0..n).filter(|mu| !blade.contains(*mu)).collect();
    let mut joined = inside.clone();
    joined.extend_from_slice(&complement);
    let (sign, _) = Blade::normalize(&joined).unwrap();
    let g: i64 = inside.iter().map(|&mu| metric.diagonal(mu)).product();
    (sign * g, complement)
}

/// Hodge star on the spacetime block, coefficients carried along. With
/// `inverse` the map `∗⁻¹` is applied instead.
pub fn hodge(form: &Form, metric: Metric, inverse: bool) -> Result<Form> {
    if !form.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    let space = form.space();
    let n = space.n();
    let target_degree =
        n.checked_sub(form.degree()).ok_or(Error::DegreeOutOfRange { degree: form.degree(), max: n })?;
    let mut out = Form::zero(space, target_degree);
    for (blade, coeff) in form.terms() {
        let term = if inverse {
            // ∗(dx^C) = c·dx^B where B is the complement of C; invert that.
            let complement: Vec<usize> = (0..n).filter(|mu| !blade.contains(*mu)).collect();
            let (_, b) = Blade::normalize(&complement).unwrap();
            let (c, _) = hodge_blade(n, &b, metric);
            Form::monomial(coeff.scale(&integer(c)), &complement)
        } else {
            let (c, complement) = hodge_blade(n, blade, metric);
            Form::monomial(coeff.scale(&integer(c)), &complement)
        };
        out += &term;
    }
    Ok(out)
}

/// Extended space together with its ordinary counterpart, the canonical
/// structures `θ, ω, Σ, θ^V, ω^V`, and the precomputed contraction systems.
///
/// Everything is computed once in [`Multiphase::new`] and never mutated,
/// so a shared reference can be used from several threads.
#[derive(Clone, Debug)]
pub struct Multiphase {
    extended: PhaseSpace,
    ordinary: PhaseSpace,
    theta: Form,
    omega: Form,
    sigma: MultiVector,
    theta_v: Form,
    omega_v: Form,
    pub(crate) omega_solver: ContractionSolver,
    pub(crate) omega_v_solver: ContractionSolver,
}

impl Multiphase {
    pub fn new(n: usize, fields: usize) -> Result<Self> {
        let extended = PhaseSpace::new(n, fields, Flavor::Extended)?;
        let ordinary = extended.with_flavor(Flavor::Ordinary);
        let theta = theta(extended)?;
        let omega = omega(extended)?;
        let sigma = euler_field(extended)?;
        let (theta_v, omega_v) = ordinary_structures(ordinary)?;
        let omega_solver = ContractionSolver::new(&omega);
        let omega_v_solver = ContractionSolver::new(&omega_v);
        Ok(Multiphase { extended, ordinary, theta, omega, sigma, theta_v, omega_v, omega_solver, omega_v_solver })
    }

    pub fn n(&self) -> usize {
        self.extended.n()
    }

    pub fn fields(&self) -> usize {
        self.extended.fields()
    }

    pub fn extended(&self) -> PhaseSpace {
        self.extended
    }

    pub fn ordinary(&self) -> PhaseSpace {
        self.ordinary
    }

    pub fn theta(&self) -> &Form {
        &self.theta
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn sigma(&self) -> &MultiVector {
        &self.sigma
    }

    pub fn theta_v(&self) -> &Form {
        &self.theta_v
    }

    pub fn omega_v(&self) -> &Form {
        &self.omega_v
    }

    pub fn omega_solver(&self) -> &ContractionSolver {
        &self.omega_solver
    }

    pub fn omega_v_solver(&self) -> &ContractionSolver {
        &self.omega_v_solver
    }
}
