//! Hamiltonian forms and multi-vector fields: solving `i(X)ω = df`,
//! exactness, the momentum map `J`, Poisson forms, and the standard
//! example families.
//!
//! `ω` has constant coefficients, so `i(X)ω = β` splits into one constant
//! rational system per polynomial monomial of `β`. [`ContractionSolver`]
//! row-reduces that system once per tensor degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::conventions::{momentum_map_sign, parity, shifted};
use crate::error::Error;
use crate::exterior::{all_blades, has_constant_coefficients, Blade, Form, MultiVector};
use crate::linalg::{RowReduction, SparseVec};
use crate::multiphase::{vertical_derivative, Flavor, Multiphase, PhaseSpace};
use crate::scalar::{integer, Monomial, Rational, Scalar};
use crate::schouten::schouten;
use crate::Result;

#[derive(Clone, Debug)]
struct ContractionSystem {
    columns: Vec<Blade>,
    rows: Vec<Blade>,
    row_index: BTreeMap<Blade, usize>,
    reduction: RowReduction,
    kernel: Vec<MultiVector>,
}

/// Precomputed row reductions of `Y ↦ i(Y)Ω` for a constant form `Ω`, one
/// per tensor degree `1 ≤ k ≤ deg Ω`.
#[derive(Clone, Debug)]
pub struct ContractionSolver {
    space: PhaseSpace,
    form: Form,
    systems: Vec<ContractionSystem>,
}

impl ContractionSolver {
    pub fn new(form: &Form) -> Self {
        assert!(has_constant_coefficients(form), "contraction solver needs a constant form");
        let space = form.space();
        let dim = space.dim();
        let top = form.degree();
        let mut systems = Vec::new();
        for k in 1..=top {
            let columns = all_blades(dim, k);
            let rows = all_blades(dim, top - k);
            let row_index: BTreeMap<Blade, usize> = rows.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
            let mut matrix = alloc::vec![SparseVec::new(); rows.len()];
            for (j, col) in columns.iter().enumerate() {
                let image = MultiVector::from_terms(space, k, [(col.clone(), Scalar::one(space))]).contract(form);
                for (b, c) in image.terms() {
                    matrix[row_index[b]].insert(j, c.constant_term());
                }
            }
            let reduction = RowReduction::new(rows.len(), columns.len(), matrix);
            let kernel = reduction
                .kernel()
                .into_iter()
                .map(|v| {
                    MultiVector::from_terms(
                        space,
                        k,
                        v.into_iter().map(|(j, c)| (columns[j].clone(), Scalar::constant(space, c))),
                    )
                })
                .collect();
            systems.push(ContractionSystem { columns, rows, row_index, reduction, kernel });
        }
        ContractionSolver { space, form: form.clone(), systems }
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    fn system(&self, k: usize) -> Option<&ContractionSystem> {
        k.checked_sub(1).and_then(|i| self.systems.get(i))
    }

    /// Rank of the constant contraction map on `k`-vectors.
    pub fn rank(&self, k: usize) -> usize {
        self.system(k).map_or(0, |s| s.reduction.rank())
    }

    /// Constant basis of `{Y ∈ Λ^k : i(Y)Ω = 0}`.
    pub fn kernel_basis(&self, k: usize) -> Vec<MultiVector> {
        let space = self.space;
        match self.system(k) {
            Some(sys) => sys.kernel.clone(),
            // Ω is nonzero in our uses, so i(c)Ω = cΩ has no kernel.
            None if k == 0 => Vec::new(),
            // degree above Ω: everything is annihilated
            None => all_blades(space.dim(), k)
                .into_iter()
                .map(|b| MultiVector::from_terms(space, k, [(b, Scalar::one(space))]))
                .collect(),
        }
    }

    fn kernel(&self, k: usize) -> impl Iterator<Item = MultiVector> + '_ {
        let cached = self.system(k).map(|s| s.kernel.iter().cloned());
        let rest = if cached.is_none() { self.kernel_basis(k) } else { Vec::new() };
        cached.into_iter().flatten().chain(rest)
    }

    /// A `k`-vector `Y` with `i(Y)Ω = target`, solved monomial by monomial
    /// with free variables set to zero.
    pub fn solve(&self, k: usize, target: &Form) -> Result<MultiVector> {
        let space = self.space;
        if target.space() != space {
            return Err(Error::SpaceMismatch);
        }
        if target.is_zero() {
            return Ok(MultiVector::zero(space, k));
        }
        let top = self.form.degree();
        if k == 0 || k > top || target.degree() != top - k {
            return Err(Error::NotHamiltonian(format!(
                "no {k}-vector contracts the structure form to a {}-form",
                target.degree()
            )));
        }
        let sys = self.system(k).unwrap();
        let mut by_monomial: BTreeMap<Monomial, SparseVec> = BTreeMap::new();
        for (blade, coeff) in target.terms() {
            let row = sys.row_index[blade];
            for (m, c) in coeff.terms() {
                by_monomial.entry(m.clone()).or_default().insert(row, c.clone());
            }
        }
        let mut columns: BTreeMap<usize, Vec<(Monomial, Rational)>> = BTreeMap::new();
        for (m, b) in &by_monomial {
            match sys.reduction.solve(b) {
                Ok(x) => {
                    for (j, v) in x {
                        columns.entry(j).or_default().push((m.clone(), v));
                    }
                }
                Err(row) => {
                    let cert = sys.reduction.certificate(row);
                    let blades: Vec<String> = cert
                        .keys()
                        .filter(|r| b.contains_key(r))
                        .map(|&r| describe_blade(space, &sys.rows[r]))
                        .collect();
                    return Err(Error::NotHamiltonian(format!(
                        "component {} along [{}] is outside the image of i(·)ω",
                        describe_monomial(space, m),
                        blades.join(", ")
                    )));
                }
            }
        }
        Ok(MultiVector::from_terms(
            space,
            k,
            columns.into_iter().map(|(j, terms)| (sys.columns[j].clone(), Scalar::from_terms(space, terms))),
        ))
    }
}

fn describe_monomial(space: PhaseSpace, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .flat_map(|(i, &e)| core::iter::repeat_n(i, usize::from(e)))
        .map(|i| format!("{}", space.coordinate(i)))
        .collect();
    if parts.is_empty() {
        String::from("1")
    } else {
        parts.join("*")
    }
}

fn describe_blade(space: PhaseSpace, b: &Blade) -> String {
    let parts: Vec<String> = b.indices().map(|i| format!("d{}", space.coordinate(i))).collect();
    parts.join("^")
}

/// `(f, X)` with `i(X)ω = df` (or `i(X̃)ω^V = d^V f̃` on the ordinary space).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianPair {
    form: Form,
    field: MultiVector,
}

impl HamiltonianPair {
    /// Pairs without checking; every consumer in this crate re-verifies.
    pub fn new_unchecked(form: Form, field: MultiVector) -> Self {
        HamiltonianPair { form, field }
    }

    pub fn form(&self) -> &Form {
        &self.form
    }

    pub fn field(&self) -> &MultiVector {
        &self.field
    }

    /// Tensor degree of the field.
    pub fn r(&self) -> usize {
        self.field.degree()
    }

    pub fn into_parts(self) -> (Form, MultiVector) {
        (self.form, self.field)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonCertificate {
    pub form: Form,
    /// `i(Z)ω = f`.
    pub z: MultiVector,
    /// Kernel elements `b` of `ω` with the (vanishing) residual `i(b)f`.
    pub kernel_checks: Vec<(MultiVector, Form)>,
}

impl PoissonCertificate {
    pub fn reverify(&self, mp: &Multiphase) -> bool {
        self.z.contract(mp.omega()) == self.form
            && self.kernel_checks.iter().all(|(b, res)| res.is_zero() && b.contract(mp.omega()).is_zero())
    }
}

/// Output of [`Multiphase::dw_hamiltonian_form`].
#[derive(Clone, Debug)]
pub struct DwHamiltonian {
    pub pair: HamiltonianPair,
    /// `Z_0, …, Z_{n−1}` with `i(ε Z_0∧…∧Z_{n−1})ω = df`; `None` if the
    /// ansatz produced no witness.
    pub witness: Option<Vec<MultiVector>>,
    /// `ε = (−1)^n`.
    pub orientation: i64,
}

impl Multiphase {
    /// Constant basis of the kernel of `Y ↦ i(Y)ω` on `k`-vectors.
    pub fn omega_kernel_basis(&self, k: usize) -> Result<Vec<MultiVector>> {
        let dim = self.extended().dim();
        if k == 0 || k > dim {
            return Err(Error::DegreeOutOfRange { degree: k, max: dim });
        }
        Ok(self.omega_solver.kernel_basis(k))
    }

    /// A particular solution of `i(X)ω = df`.
    pub fn solve_hamiltonian(&self, f: &Form) -> Result<HamiltonianPair> {
        let n = self.n();
        if f.space() != self.extended() {
            return Err(Error::SpaceMismatch);
        }
        if f.degree() >= n {
            return Err(Error::DegreeOutOfRange { degree: f.degree(), max: n - 1 });
        }
        let df = f.d();
        let x = self.omega_solver.solve(n - f.degree(), &df)?;
        Ok(HamiltonianPair { form: f.clone(), field: x })
    }

    /// `i(X)ω − df = 0`.
    pub fn verify_pair(&self, x: &MultiVector, f: &Form) -> Result<bool> {
        if x.space() != self.extended() || f.space() != self.extended() {
            return Err(Error::SpaceMismatch);
        }
        if !x.is_zero() && !f.is_zero() && x.degree() + f.degree() != self.n() {
            return Err(Error::DegreeMismatch { form: f.degree(), field: x.degree(), expected: self.n() });
        }
        Ok(x.contract(self.omega()) == f.d())
    }

    /// Wraps a pair after checking it.
    pub fn pair(&self, f: Form, x: MultiVector) -> Result<HamiltonianPair> {
        if self.verify_pair(&x, &f)? {
            Ok(HamiltonianPair { form: f, field: x })
        } else {
            Err(Error::InvalidPair)
        }
    }

    pub fn check_pair(&self, p: &HamiltonianPair) -> Result<()> {
        if self.verify_pair(&p.field, &p.form)? {
            Ok(())
        } else {
            Err(Error::InvalidPair)
        }
    }

    /// `L_X θ = 0`.
    pub fn is_exact(&self, x: &MultiVector) -> bool {
        x.lie_derivative(self.theta()).is_zero()
    }

    /// `J(X) = (−1)^{r−1} i(X)θ`.
    pub fn j_form(&self, x: &MultiVector) -> Form {
        x.contract(self.theta()).scale_int(momentum_map_sign(x.degree()))
    }

    /// Exact field together with its momentum form.
    pub fn exact_pair(&self, x: &MultiVector) -> Result<HamiltonianPair> {
        if !self.is_exact(x) {
            return Err(Error::NotExact);
        }
        self.pair(self.j_form(x), x.clone())
    }

    /// Both characterizations of a Poisson form, evaluated separately:
    /// (`i(b)f = 0` for every kernel element `b`, some `Z` with `i(Z)ω = f`).
    pub fn poisson_characterizations(
        &self,
        f: &Form,
    ) -> (core::result::Result<Vec<(MultiVector, Form)>, String>, Option<MultiVector>) {
        let mut checks = Vec::new();
        let mut failure = None;
        for k in 1..=f.degree() {
            for b in self.omega_solver.kernel(k) {
                let residual = b.contract(f);
                if !residual.is_zero() && failure.is_none() {
                    failure = Some(format!(
                        "kernel element of degree {k} does not annihilate the form: i(b)f = {} terms",
                        residual.num_terms()
                    ));
                }
                checks.push((b, residual));
            }
        }
        let n = self.n();
        let z = if f.degree() <= n + 1 { self.omega_solver.solve(n + 1 - f.degree(), f).ok() } else { None };
        let kernel = match failure {
            Some(why) => Err(why),
            None => Ok(checks),
        };
        (kernel, z)
    }

    pub fn is_poisson(&self, f: &Form) -> Result<PoissonCertificate> {
        self.solve_hamiltonian(f)?;
        let (kernel, z) = self.poisson_characterizations(f);
        match (kernel, z) {
            (Ok(kernel_checks), Some(z)) => Ok(PoissonCertificate { form: f.clone(), z, kernel_checks }),
            (Err(why), None) => Err(Error::NotPoisson(why)),
            (Err(why), Some(_)) => Err(Error::NotPoisson(format!("characterizations disagree: {why}"))),
            (Ok(_), None) => Err(Error::NotPoisson(String::from(
                "characterizations disagree: kernel condition holds but no Z with i(Z)ω = f",
            ))),
        }
    }

    /// `f = −H − p` with its Hamiltonian `n`-vector field and, when the
    /// De Donder–Weyl ansatz works out, a decomposition
    /// `X = ε Z_0∧…∧Z_{n−1}`.
    pub fn dw_hamiltonian_form(&self, h: &Scalar) -> Result<DwHamiltonian> {
        let space = self.extended();
        let h = match h.space().flavor() {
            Flavor::Ordinary if h.space() == self.ordinary() => h.reinterpret(space)?,
            Flavor::Extended if h.space() == space => h.clone(),
            _ => return Err(Error::SpaceMismatch),
        };
        let e = space.energy().unwrap();
        if h.depends_on(e) {
            return Err(Error::Precondition(String::from("H must not depend on p")));
        }
        let f = Form::from_scalar(-(&h + &Scalar::var(space, e)));
        let pair = self.solve_hamiltonian(&f)?;
        let orientation = parity(self.n());
        let witness = self.dw_witness(&h, &f, orientation);
        Ok(DwHamiltonian { pair, witness, orientation })
    }

    fn dw_witness(&self, h: &Scalar, f: &Form, orientation: i64) -> Option<Vec<MultiVector>> {
        let space = self.extended();
        let (n, nf) = (self.n(), self.fields());
        let e = space.energy().unwrap();
        let inv_n = Rational::new(1.into(), (n as i64).into());
        let base: Vec<MultiVector> = (0..n)
            .map(|mu| {
                let mut z = MultiVector::partial(space, mu);
                for i in 1..=nf {
                    // dq^i/dx^μ = ∂H/∂p^μ_i
                    z += &MultiVector::monomial(h.derivative(space.momentum(mu, i)), &[space.q(i)]);
                    // Σ_μ dp^μ_i/dx^μ = −∂H/∂q^i, split evenly over μ
                    z += &MultiVector::monomial((-h.derivative(space.q(i))).scale(&inv_n), &[space.momentum(mu, i)]);
                }
                z
            })
            .collect();
        let wedge_all = |factors: &[MultiVector]| -> MultiVector {
            let mut acc = MultiVector::from_scalar(Scalar::constant(space, integer(orientation)));
            for z in factors {
                acc = acc.wedge(z);
            }
            acc
        };
        let df = f.d();
        let residual = &wedge_all(&base).contract(self.omega()) - &df;
        // The ∂_p components enter linearly, each only through −dp ∧ d^n x.
        let mut factors = base.clone();
        for mu in 0..n {
            let mut probe = base.clone();
            probe[mu] = MultiVector::partial(space, e);
            let response = wedge_all(&probe).contract(self.omega());
            let key = Blade::normalize(&[mu]).unwrap().1;
            let k = response.coefficient(&key).as_constant()?;
            if k.is_zero() {
                return None;
            }
            let c = (-residual.coefficient(&key)).scale(&(Rational::from_integer(1.into()) / k));
            factors[mu] += &MultiVector::monomial(c, &[e]);
        }
        (wedge_all(&factors).contract(self.omega()) == df).then_some(factors)
    }

    /// Canonical lift of a projectable vector field
    /// `ξ = ξ^μ(x) ∂_μ + ξ^i(x,q) ∂_i` to the unique `ξ_P` with
    /// `L_{ξ_P} θ = 0` extending it.
    pub fn canonical_lift(&self, xi: &MultiVector) -> Result<MultiVector> {
        let space = self.extended();
        if xi.space() != space {
            return Err(Error::SpaceMismatch);
        }
        if xi.degree() != 1 && !xi.is_zero() {
            return Err(Error::NotProjectable);
        }
        for (b, c) in xi.terms() {
            let k = b.indices().next().unwrap();
            let allowed: &dyn Fn(usize) -> bool = if space.is_spacetime(k) {
                &|i| space.is_spacetime(i)
            } else if space.is_field(k) {
                &|i| space.is_spacetime(i) || space.is_field(i)
            } else {
                return Err(Error::NotProjectable);
            };
            if (0..space.dim()).any(|i| !allowed(i) && c.depends_on(i)) {
                return Err(Error::NotProjectable);
            }
        }
        // L_{ξ+V}θ = L_ξθ − i(V)ω for vertical V, so i(V)ω = L_ξθ.
        let source = xi.lie_derivative(self.theta());
        let v = self.omega_solver.solve(1, &source).map_err(|e| Error::LiftFailed(format!("{e}")))?;
        let momentum_like = |i: usize| space.is_momentum(i) || space.is_energy(i);
        for (b, c) in v.terms() {
            let k = b.indices().next().unwrap();
            if !momentum_like(k) {
                return Err(Error::LiftFailed(String::from("correction is not vertical")));
            }
            if c.degree_in(momentum_like) > 1 {
                return Err(Error::LiftFailed(String::from("correction is not affine in momenta")));
            }
        }
        let lift = xi + &v;
        if !self.is_exact(&lift) {
            return Err(Error::LiftFailed(String::from("L_ξ θ ≠ 0 after correction")));
        }
        Ok(lift)
    }

    /// `J(X₁∧X₂)` for commuting exact vector fields.
    pub fn commuting_pair_form(&self, x1: &MultiVector, x2: &MultiVector) -> Result<Form> {
        if x1.degree() != 1 || x2.degree() != 1 {
            return Err(Error::Precondition(String::from("X₁ and X₂ must be vector fields")));
        }
        if !self.is_exact(x1) {
            return Err(Error::Precondition(String::from("X₁ is not exact")));
        }
        if !self.is_exact(x2) {
            return Err(Error::Precondition(String::from("X₂ is not exact")));
        }
        if !schouten(x1, x2).is_zero() {
            return Err(Error::Precondition(String::from("[X₁, X₂] ≠ 0")));
        }
        let wedge = x1.wedge(x2);
        if !self.is_exact(&wedge) {
            return Err(Error::Precondition(String::from("L_{X₁∧X₂} θ ≠ 0")));
        }
        let f = self.j_form(&wedge);
        self.is_poisson(&f)?;
        Ok(f)
    }

    /// `(f, X) ↦ ((−1)^{r−1} i(X)θ, X + [Σ, X])`.
    ///
    /// The image form equals `i(Σ)df`, so it does not depend on the choice
    /// of `X`; it is Poisson and `(f′, X′)` is always a Hamiltonian pair.
    /// `X′` is exact iff `L_Σ L_X θ = 0`, which holds on exact pairs and on
    /// forms of momentum weight one but fails for e.g. `−(q² + p·p) − p`.
    pub fn project_to_poisson(&self, f: &Form, x: &MultiVector) -> Result<(Form, MultiVector)> {
        if !self.verify_pair(x, f)? {
            return Err(Error::InvalidPair);
        }
        let r = x.degree();
        let f_new = x.contract(self.theta()).scale_int(-parity(r));
        let x_new = x + &schouten(self.sigma(), x);
        Ok((f_new, x_new))
    }

    /// Particular solution of `i(X̃)ω^V = d^V f̃` on the ordinary space.
    pub fn solve_kanatchikov(&self, f: &Form) -> Result<HamiltonianPair> {
        let n = self.n();
        if f.space() != self.ordinary() {
            return Err(Error::SpaceMismatch);
        }
        if !f.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        if f.degree() >= n {
            return Err(Error::DegreeOutOfRange { degree: f.degree(), max: n - 1 });
        }
        let dvf = vertical_derivative(f)?;
        let x = self.omega_v_solver.solve(n - f.degree(), &dvf)?;
        Ok(HamiltonianPair { form: f.clone(), field: x })
    }

    pub fn verify_kanatchikov(&self, x: &MultiVector, f: &Form) -> Result<bool> {
        if x.space() != self.ordinary() || f.space() != self.ordinary() {
            return Err(Error::SpaceMismatch);
        }
        if !f.is_horizontal() {
            return Err(Error::NotHorizontal);
        }
        if !x.is_zero() && !f.is_zero() && x.degree() + f.degree() != self.n() {
            return Err(Error::DegreeMismatch { form: f.degree(), field: x.degree(), expected: self.n() });
        }
        Ok(x.contract(self.omega_v()) == vertical_derivative(f)?)
    }

    /// Highest polynomial degree of the coefficients in the multimomenta.
    pub fn momentum_degree(&self, f: &Form) -> usize {
        let space = f.space();
        f.coefficient_degree_in(|i| space.is_momentum(i))
    }

    /// Graded-antisymmetry sign `(−1)^{(r−1)(s−1)}`, exposed for callers
    /// assembling identities by hand.
    pub fn shifted_sign(r: usize, s: usize) -> i64 {
        shifted(r, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(n: usize, nf: usize) -> Multiphase {
        Multiphase::new(n, nf).unwrap()
    }

    #[test]
    fn no_kernel_on_vectors() {
        for (n, nf) in [(1, 1), (2, 1), (3, 2)] {
            assert!(mp(n, nf).omega_kernel_basis(1).unwrap().is_empty());
        }
    }

    #[test]
    fn bivector_kernel_contains_momentum_pair() {
        let m = mp(2, 1);
        let s = m.extended();
        let kernel = m.omega_kernel_basis(2).unwrap();
        assert!(!kernel.is_empty());
        for b in &kernel {
            assert!(b.contract(m.omega()).is_zero());
        }
        let pp = MultiVector::basis(s, &[s.momentum(0, 1), s.momentum(1, 1)]);
        assert!(pp.contract(m.omega()).is_zero());
    }

    #[test]
    fn minus_p_has_coordinate_bivector() {
        let m = mp(2, 1);
        let s = m.extended();
        let f = Form::from_scalar(-Scalar::var(s, s.energy().unwrap()));
        let pair = m.solve_hamiltonian(&f).unwrap();
        assert!(m.verify_pair(pair.field(), &f).unwrap());
        assert!(m.verify_pair(&MultiVector::basis(s, &[0, 1]), &f).unwrap());
    }

    #[test]
    fn constants_need_nothing() {
        let m = mp(2, 1);
        let s = m.extended();
        let c = Form::from_scalar(Scalar::from_int(s, 5));
        let pair = m.solve_hamiltonian(&c).unwrap();
        assert!(pair.field().is_zero());
        assert!(m.verify_pair(&MultiVector::zero(s, 0), &c).unwrap());
    }

    #[test]
    fn cross_momentum_form_is_not_hamiltonian() {
        // F^0 = p^1_1: ∂F^0/∂p^1 ≠ 0 is outside the image.
        let m = mp(2, 1);
        let s = m.extended();
        let f = Form::monomial(Scalar::var(s, s.momentum(1, 1)), &[1]);
        assert!(matches!(m.solve_hamiltonian(&f), Err(Error::NotHamiltonian(_))));
        assert!(matches!(m.is_poisson(&f), Err(Error::NotHamiltonian(_))));
    }

    #[test]
    fn degree_gate() {
        let m = mp(2, 1);
        let s = m.extended();
        assert!(matches!(m.solve_hamiltonian(&Form::basis(s, &[0, 1])), Err(Error::DegreeOutOfRange { .. })));
        assert!(matches!(
            m.verify_pair(&MultiVector::partial(s, 0), &Form::from_scalar(Scalar::one(s))),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn euler_field_is_not_hamiltonian_for_theta_like_forms() {
        let m = mp(2, 1);
        let s = m.extended();
        let f = Form::monomial(Scalar::var(s, s.q(1)), &[1]);
        assert!(!m.verify_pair(m.sigma(), &f).unwrap());
        assert!(!m.is_exact(m.sigma()));
        assert_eq!(m.sigma().lie_derivative(m.theta()), m.theta().clone());
        assert!(m.j_form(m.sigma()).is_zero());
    }

    #[test]
    fn exactness_of_translations() {
        let m = mp(2, 1);
        let s = m.extended();
        assert!(m.is_exact(&MultiVector::partial(s, 0)));
        assert!(m.is_exact(&MultiVector::zero(s, 1)));
        let x = MultiVector::partial(s, 0);
        let pair = m.exact_pair(&x).unwrap();
        // J(∂_0) = i(∂_0)θ = p^1_1 dq + p dx¹
        let expect = &Form::monomial(Scalar::var(s, s.momentum(1, 1)), &[s.q(1)])
            + &Form::monomial(Scalar::var(s, s.energy().unwrap()), &[1]);
        assert_eq!(pair.form(), &expect);
    }

    #[test]
    fn lift_examples() {
        let m = mp(2, 1);
        let s = m.extended();
        let d0 = MultiVector::partial(s, 0);
        assert_eq!(m.canonical_lift(&d0).unwrap(), d0);
        let dq = MultiVector::partial(s, s.q(1));
        assert_eq!(m.canonical_lift(&dq).unwrap(), dq);
        let q = Scalar::var(s, s.q(1));
        let xi = MultiVector::monomial(q.clone(), &[s.q(1)]);
        let mut expect = xi.clone();
        for mu in 0..2 {
            let p = s.momentum(mu, 1);
            expect -= &MultiVector::monomial(Scalar::var(s, p), &[p]);
        }
        assert_eq!(m.canonical_lift(&xi).unwrap(), expect);
        let bad = MultiVector::monomial(q, &[0]);
        assert_eq!(m.canonical_lift(&bad), Err(Error::NotProjectable));
        let shear = MultiVector::monomial(Scalar::var(s, 1), &[0]);
        let lifted = m.canonical_lift(&shear).unwrap();
        assert!(m.is_exact(&lifted));
        assert!(m.is_poisson(&m.j_form(&lifted)).is_ok());
    }

    #[test]
    fn commuting_pairs() {
        let m = mp(2, 1);
        let s = m.extended();
        let d0 = MultiVector::partial(s, 0);
        let d1 = MultiVector::partial(s, 1);
        let f = m.commuting_pair_form(&d0, &d1).unwrap();
        assert_eq!(f.degree(), 0);
        assert_eq!(f, m.j_form(&d0.wedge(&d1)));
        let dq = MultiVector::partial(s, s.q(1));
        assert!(m.commuting_pair_form(&dq, &d0).is_ok());
        assert!(matches!(m.commuting_pair_form(&d0, m.sigma()), Err(Error::Precondition(_))));
    }

    #[test]
    fn non_poisson_hamiltonian_form() {
        // n = 3: dp ∧ dp⁰₁ is closed (so Hamiltonian with X = 0) but the
        // kernel bivector ∂_p ∧ ∂_{p⁰₁} detects it.
        let m = mp(3, 1);
        let s = m.extended();
        let x = m.canonical_lift(&MultiVector::partial(s, s.q(1))).unwrap();
        let j = m.j_form(&x);
        assert!(m.is_poisson(&j).is_ok());
        let bad = &j + &Form::basis(s, &[s.energy().unwrap(), s.momentum(0, 1)]);
        assert!(m.solve_hamiltonian(&bad).is_ok());
        assert!(matches!(m.is_poisson(&bad), Err(Error::NotPoisson(_))));
        let (kernel, z) = m.poisson_characterizations(&bad);
        assert!(kernel.is_err() && z.is_none());
    }

    #[test]
    fn projection_kills_constants() {
        let m = mp(2, 1);
        let s = m.extended();
        let p = Scalar::var(s, s.energy().unwrap());
        let f = Form::from_scalar(&-p.clone() + &Scalar::from_int(s, 3));
        let x = MultiVector::basis(s, &[0, 1]);
        let (f2, x2) = m.project_to_poisson(&f, &x).unwrap();
        assert_eq!(f2, Form::from_scalar(-p));
        assert_eq!(x2, x);
        assert!(m.is_exact(&x2));
    }
}
