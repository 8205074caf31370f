//! First-order field theory: multimomenta, the De Donder–Weyl Hamiltonian,
//! and residuals of the Euler–Lagrange and De Donder–Weyl equations on
//! polynomial field configurations.
//!
//! Lagrangians live on the [`Flavor::Jet`] space, where the momentum slot
//! `(μ, i)` holds the velocity `v^i_μ = ∂_μ φ^i`. Hamiltonians live on the
//! [`Flavor::Ordinary`] space with the same layout, so the Legendre map only
//! has to change what the slot means.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::Error;
use crate::linalg::{RowReduction, SparseVec};
use crate::multiphase::{Flavor, PhaseSpace};
use crate::scalar::{Rational, Scalar};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianDensity {
    l: Scalar,
}

impl LagrangianDensity {
    pub fn new(l: Scalar) -> Result<Self> {
        if l.space().flavor() != Flavor::Jet {
            return Err(Error::WrongFlavor { expected: Flavor::Jet, found: l.space().flavor() });
        }
        Ok(LagrangianDensity { l })
    }

    pub fn space(&self) -> PhaseSpace {
        self.l.space()
    }

    pub fn scalar(&self) -> &Scalar {
        &self.l
    }

    /// `½ Σ_μ g^{μμ} (v^1_μ)²` summed over all fields.
    pub fn free_scalar(space: PhaseSpace, signs: &[i64]) -> Result<Self> {
        let half = Rational::new(1.into(), 2.into());
        let mut l = Scalar::zero(space);
        for i in 1..=space.fields() {
            for mu in 0..space.n() {
                let sign = signs.get(mu).copied().unwrap_or(1);
                let v = Scalar::var(space, space.momentum(mu, i));
                l += &(&v * &v).scale(&(&half * Rational::from_integer(sign.into())));
            }
        }
        LagrangianDensity::new(l)
    }
}

/// Polynomial section `φ^i(x)`, optionally with `π^μ_i(x)`, on the jet space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldConfiguration {
    space: PhaseSpace,
    phi: Vec<Scalar>,
    pi: Option<Vec<Vec<Scalar>>>,
}

fn x_only(s: &Scalar) -> bool {
    let space = s.space();
    (0..space.dim()).all(|k| space.is_spacetime(k) || !s.depends_on(k))
}

impl FieldConfiguration {
    pub fn new(phi: Vec<Scalar>) -> Result<Self> {
        let space =
            phi.first().map(Scalar::space).ok_or_else(|| Error::Precondition(String::from("empty configuration")))?;
        if space.flavor() != Flavor::Jet {
            return Err(Error::WrongFlavor { expected: Flavor::Jet, found: space.flavor() });
        }
        if phi.len() != space.fields() {
            return Err(Error::IndexOutOfRange { index: phi.len(), len: space.fields() });
        }
        if phi.iter().any(|s| s.space() != space) {
            return Err(Error::SpaceMismatch);
        }
        if !phi.iter().all(x_only) {
            return Err(Error::Precondition(String::from("φ must depend on x only")));
        }
        Ok(FieldConfiguration { space, phi, pi: None })
    }

    /// Adds `π[μ][i−1]`.
    pub fn with_momenta(mut self, pi: Vec<Vec<Scalar>>) -> Result<Self> {
        let (n, nf) = (self.space.n(), self.space.fields());
        if pi.len() != n || pi.iter().any(|row| row.len() != nf) {
            return Err(Error::IndexOutOfRange { index: pi.len(), len: n });
        }
        if pi.iter().flatten().any(|s| s.space() != self.space) {
            return Err(Error::SpaceMismatch);
        }
        if !pi.iter().flatten().all(x_only) {
            return Err(Error::Precondition(String::from("π must depend on x only")));
        }
        self.pi = Some(pi);
        Ok(self)
    }

    /// `π^μ_i(x) = ∂L/∂v^i_μ` evaluated on `φ(x)`.
    pub fn with_momenta_from(self, l: &LagrangianDensity) -> Result<Self> {
        let pi = multimomenta(l).iter().map(|row| row.iter().map(|p| self.on_section(p)).collect()).collect();
        self.with_momenta(pi)
    }

    pub fn space(&self) -> PhaseSpace {
        self.space
    }

    pub fn phi(&self) -> &[Scalar] {
        &self.phi
    }

    pub fn pi(&self) -> Option<&[Vec<Scalar>]> {
        self.pi.as_deref()
    }

    /// `∂_μ φ^i`.
    pub fn gradient(&self, mu: usize, field: usize) -> Scalar {
        self.phi[field - 1].derivative(self.space.x(mu))
    }

    /// Substitutes `q^i → φ^i(x)`, `v^i_μ → ∂_μ φ^i(x)`.
    pub fn on_section(&self, s: &Scalar) -> Scalar {
        let space = self.space;
        let mut values = BTreeMap::new();
        for i in 1..=space.fields() {
            values.insert(space.q(i), self.phi[i - 1].clone());
            for mu in 0..space.n() {
                values.insert(space.momentum(mu, i), self.gradient(mu, i));
            }
        }
        s.reinterpret(space).map(|s| s.substitute_all(&values)).unwrap()
    }

    /// Substitutes `q^i → φ^i(x)`, `p^μ_i → π^μ_i(x)`.
    fn on_phase_section(&self, s: &Scalar) -> Result<Scalar> {
        let space = self.space;
        let pi = self.pi.as_ref().ok_or_else(missing_momenta)?;
        let mut values = BTreeMap::new();
        for i in 1..=space.fields() {
            values.insert(space.q(i), self.phi[i - 1].clone());
            for mu in 0..space.n() {
                values.insert(space.momentum(mu, i), pi[mu][i - 1].clone());
            }
        }
        Ok(s.reinterpret(space)?.substitute_all(&values))
    }
}

fn missing_momenta() -> Error {
    Error::Precondition(String::from("configuration has no multimomenta"))
}

/// `π^μ_i = ∂L/∂v^i_μ`, indexed `[μ][i−1]`, still on the jet space.
pub fn multimomenta(l: &LagrangianDensity) -> Vec<Vec<Scalar>> {
    let space = l.space();
    (0..space.n()).map(|mu| (1..=space.fields()).map(|i| l.l.derivative(space.momentum(mu, i))).collect()).collect()
}

/// Result of a fibre Legendre transform `F ↦ y·∂F/∂y − F` in the momentum
/// slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Legendre {
    /// The transformed function, on the target space.
    pub transformed: Scalar,
    /// Old slot values in terms of the new ones, keyed by slot index.
    pub inverse_map: BTreeMap<usize, Scalar>,
}

/// `F` at most quadratic in the momentum-slot variables `y` with constant,
/// invertible Hessian `A`: `F = ½ yᵀA y + b·y + c`, `z = A y + b`,
/// `y = A⁻¹(z − b)`, and the transform is `z·y − F` written in `z`.
pub fn legendre_transform(f: &Scalar, target: PhaseSpace) -> Result<Legendre> {
    let space = f.space();
    if target.dim() != space.dim() || target.n() != space.n() || target.fields() != space.fields() {
        return Err(Error::SpaceMismatch);
    }
    let slots: Vec<usize> = (0..space.dim()).filter(|&k| space.is_momentum(k)).collect();
    let m = slots.len();
    if f.degree_in(|k| space.is_momentum(k)) > 2 {
        return Err(Error::DegenerateLegendre(String::from(
            "only Lagrangians at most quadratic in the velocities are supported",
        )));
    }
    let gradient: Vec<Scalar> = slots.iter().map(|&k| f.derivative(k)).collect();
    let mut hessian = vec![SparseVec::new(); m];
    for (a, g) in gradient.iter().enumerate() {
        for (b, &k) in slots.iter().enumerate() {
            let entry = g.derivative(k);
            let c = entry
                .as_constant()
                .ok_or_else(|| Error::DegenerateLegendre(String::from("velocity Hessian is not constant")))?;
            if !c.is_zero() {
                hessian[a].insert(b, c);
            }
        }
    }
    let reduction = RowReduction::new(m, m, hessian);
    if reduction.rank() < m {
        let kernel = reduction.kernel();
        let witness: Vec<String> =
            kernel[0].iter().map(|(&j, c)| format!("{c}·{:?}", space.coordinate(slots[j]))).collect();
        return Err(Error::DegenerateLegendre(format!(
            "velocity Hessian has rank {} < {m}; kernel vector {}",
            reduction.rank(),
            witness.join(" + ")
        )));
    }
    // b = gradient at y = 0
    let zero_y: BTreeMap<usize, Scalar> = slots.iter().map(|&k| (k, Scalar::zero(space))).collect();
    let b: Vec<Scalar> = gradient.iter().map(|g| g.substitute_all(&zero_y)).collect();
    // A⁻¹ column by column: y = Σ_a (A⁻¹)_{·a} (z_a − b_a)
    let mut inverse_cols = Vec::with_capacity(m);
    for a in 0..m {
        let mut e = SparseVec::new();
        e.insert(a, Rational::one());
        inverse_cols.push(reduction.solve(&e).expect("invertible"));
    }
    let mut y_of_z = vec![Scalar::zero(space); m];
    for (a, col) in inverse_cols.iter().enumerate() {
        let shifted = &Scalar::var(space, slots[a]) - &b[a];
        for (&row, c) in col {
            y_of_z[row] += &shifted.scale(c);
        }
    }
    let values: BTreeMap<usize, Scalar> = slots.iter().copied().zip(y_of_z.iter().cloned()).collect();
    let mut out = -f.substitute_all(&values);
    for (a, &k) in slots.iter().enumerate() {
        out += &(&Scalar::var(space, k) * &y_of_z[a]);
    }
    let inverse_map = values.into_iter().map(|(k, s)| (k, s.reinterpret(target).unwrap())).collect();
    Ok(Legendre { transformed: out.reinterpret(target)?, inverse_map })
}

/// `H = π^μ_i v^i_μ − L` on the ordinary space, with `v` eliminated.
pub fn dw_hamiltonian(l: &LagrangianDensity) -> Result<Scalar> {
    let space = l.space().with_flavor(Flavor::Ordinary);
    Ok(legendre_transform(&l.l, space)?.transformed)
}

/// Inverse Legendre transform `L = π·∂H/∂π − H` back on the jet space.
pub fn inverse_legendre(h: &Scalar) -> Result<LagrangianDensity> {
    if h.space().flavor() != Flavor::Ordinary {
        return Err(Error::WrongFlavor { expected: Flavor::Ordinary, found: h.space().flavor() });
    }
    let target = h.space().with_flavor(Flavor::Jet);
    LagrangianDensity::new(legendre_transform(h, target)?.transformed)
}

/// `Σ_μ ∂_μ(∂L/∂v^i_μ) − ∂L/∂φ^i` on the section, per field.
pub fn euler_lagrange_residual(l: &LagrangianDensity, cfg: &FieldConfiguration) -> Result<Vec<Scalar>> {
    if l.space() != cfg.space() {
        return Err(Error::SpaceMismatch);
    }
    let space = l.space();
    let pi = multimomenta(l);
    Ok((1..=space.fields())
        .map(|i| {
            let mut r = -cfg.on_section(&l.l.derivative(space.q(i)));
            for (mu, row) in pi.iter().enumerate() {
                r += &cfg.on_section(&row[i - 1]).derivative(space.x(mu));
            }
            r
        })
        .collect())
}

/// Residuals of both De Donder–Weyl families on the section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DwResidual {
    /// `∂H/∂π^μ_i − ∂_μ φ^i`, indexed `[μ][i−1]`.
    pub velocity: Vec<Vec<Scalar>>,
    /// `∂H/∂φ^i + Σ_μ ∂_μ π^μ_i`, indexed `[i−1]`.
    pub balance: Vec<Scalar>,
}

impl DwResidual {
    pub fn velocity_zero(&self) -> bool {
        self.velocity.iter().flatten().all(Scalar::is_zero)
    }

    pub fn balance_zero(&self) -> bool {
        self.balance.iter().all(Scalar::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.velocity_zero() && self.balance_zero()
    }
}

pub fn dw_residual(h: &Scalar, cfg: &FieldConfiguration) -> Result<DwResidual> {
    let hs = h.space();
    if hs.flavor() != Flavor::Ordinary {
        return Err(Error::WrongFlavor { expected: Flavor::Ordinary, found: hs.flavor() });
    }
    if hs.with_flavor(Flavor::Jet) != cfg.space() {
        return Err(Error::SpaceMismatch);
    }
    let pi = cfg.pi.as_ref().ok_or_else(missing_momenta)?;
    let space = cfg.space();
    let mut velocity = Vec::with_capacity(space.n());
    for mu in 0..space.n() {
        let mut row = Vec::with_capacity(space.fields());
        for i in 1..=space.fields() {
            let dh = cfg.on_phase_section(&h.derivative(hs.momentum(mu, i)))?;
            row.push(&dh - &cfg.gradient(mu, i));
        }
        velocity.push(row);
    }
    let mut balance = Vec::with_capacity(space.fields());
    for i in 1..=space.fields() {
        let mut r = cfg.on_phase_section(&h.derivative(hs.q(i)))?;
        for (mu, row) in pi.iter().enumerate() {
            r += &row[i - 1].derivative(space.x(mu));
        }
        balance.push(r);
    }
    Ok(DwResidual { velocity, balance })
}

/// `∂H/∂π^μ_i(x, φ, π(x, φ, v)) − v^i_μ` as polynomials on the jet space;
/// identically zero for a regular Lagrangian.
pub fn velocity_identity(l: &LagrangianDensity) -> Result<Vec<Vec<Scalar>>> {
    let h = dw_hamiltonian(l)?;
    let space = l.space();
    let pi = multimomenta(l);
    let mut values = BTreeMap::new();
    for (mu, row) in pi.iter().enumerate() {
        for (i, p) in row.iter().enumerate() {
            values.insert(space.momentum(mu, i + 1), p.clone());
        }
    }
    Ok((0..space.n())
        .map(|mu| {
            (1..=space.fields())
                .map(|i| {
                    let k = space.momentum(mu, i);
                    let dh = h.derivative(k).reinterpret(space).unwrap().substitute_all(&values);
                    &dh - &Scalar::var(space, k)
                })
                .collect()
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub euler_lagrange: Vec<Scalar>,
    pub dw: DwResidual,
    pub euler_lagrange_zero: bool,
    pub dw_zero: bool,
}

impl EquivalenceReport {
    /// Both systems hold, or both fail.
    pub fn consistent(&self) -> bool {
        self.euler_lagrange_zero == self.dw_zero
    }
}

/// Compares the Euler–Lagrange and De Donder–Weyl residuals on `φ`, with
/// `π` taken from the Lagrangian.
pub fn equivalence_check(l: &LagrangianDensity, cfg: &FieldConfiguration) -> Result<EquivalenceReport> {
    let h = dw_hamiltonian(l)?;
    let cfg = FieldConfiguration::new(cfg.phi.clone())?.with_momenta_from(l)?;
    let el = euler_lagrange_residual(l, &cfg)?;
    let dw = dw_residual(&h, &cfg)?;
    let euler_lagrange_zero = el.iter().all(Scalar::is_zero);
    let dw_zero = dw.is_zero();
    Ok(EquivalenceReport { euler_lagrange: el, dw, euler_lagrange_zero, dw_zero })
}
