//! Brackets of Hamiltonian and Poisson forms.
//!
//! Every operation takes explicit `(f, X_f)` pairs so that different
//! representatives of the same Hamiltonian field can be injected.

use alloc::string::String;

use crate::conventions::{equivariance_sign, jacobi_anomaly_sign, parity, shifted};
use crate::error::Error;
use crate::exterior::{Form, MultiVector};
use crate::hamiltonian::HamiltonianPair;
use crate::multiphase::{hodge, Metric, Multiphase};
use crate::schouten::schouten;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BracketFormula {
    /// `(−1)^r i(X_f) i(X_g) ω`.
    Primed,
    /// Lie-derivative form of the Poisson bracket.
    Main,
    /// Contraction-plus-exact form of the Poisson bracket.
    MainAlt,
    /// `(−1)^r i(X̃_f) i(X̃_g) ω^V` on the ordinary space.
    Kanatchikov,
}

impl BracketFormula {
    pub fn name(self) -> &'static str {
        match self {
            BracketFormula::Primed => "primed",
            BracketFormula::Main => "main",
            BracketFormula::MainAlt => "main_alt",
            BracketFormula::Kanatchikov => "kanatchikov",
        }
    }
}

/// A bracket value together with the pairs it was computed from. The value
/// has degree `n + 1 − r − s` (zero form of degree 0 when that is negative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketResult {
    pub value: Form,
    pub inputs: (HamiltonianPair, HamiltonianPair),
    pub formula: BracketFormula,
}

impl BracketResult {
    /// The Hamiltonian field of the bracket, `[X_g, X_f]`.
    pub fn field(&self) -> MultiVector {
        schouten(self.inputs.1.field(), self.inputs.0.field())
    }

    /// `(value, [X_g, X_f])` as a pair, unchecked.
    pub fn pair(&self) -> HamiltonianPair {
        HamiltonianPair::new_unchecked(self.value.clone(), self.field())
    }
}

/// `(−1)^r i(X) i(Y) Ω`.
fn contraction_term(x: &MultiVector, y: &MultiVector, structure: &Form) -> Form {
    x.contract(&y.contract(structure)).scale_int(parity(x.degree()))
}

impl Multiphase {
    fn check_poisson_pair(&self, p: &HamiltonianPair) -> Result<()> {
        self.check_pair(p)?;
        self.is_poisson(p.form())?;
        Ok(())
    }

    /// `{f,g}′ = (−1)^r i(X_f) i(X_g) ω`.
    pub fn primed_bracket(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Result<BracketResult> {
        self.check_pair(f)?;
        self.check_pair(g)?;
        Ok(BracketResult {
            value: contraction_term(f.field(), g.field(), self.omega()),
            inputs: (f.clone(), g.clone()),
            formula: BracketFormula::Primed,
        })
    }

    /// `−L_{X_f} g + (−1)^{(r−1)(s−1)} L_{X_g} f − (−1)^{(r−1)s} L_{X_f∧X_g} θ`,
    /// evaluated without the Poisson gate.
    pub(crate) fn main_bracket_value(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Form {
        let (xf, xg) = (f.field(), g.field());
        let (r, s) = (xf.degree(), xg.degree());
        let a = xf.lie_derivative(g.form());
        let b = xg.lie_derivative(f.form()).scale_int(shifted(r, s));
        let c = xf.wedge(xg).lie_derivative(self.theta()).scale_int(parity((r + 1) * s));
        &(&b - &a) - &c
    }

    /// `(−1)^r i(X_f) i(X_g) ω + d((−1)^{(r−1)(s−1)} i(X_g) f − i(X_f) g − (−1)^{(r−1)s} i(X_g) i(X_f) θ)`.
    pub(crate) fn main_bracket_alt_value(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Form {
        let (xf, xg) = (f.field(), g.field());
        let (r, s) = (xf.degree(), xg.degree());
        let head = contraction_term(xf, xg, self.omega());
        let inner = &(&xg.contract(f.form()).scale_int(shifted(r, s)) - &xf.contract(g.form()))
            - &xg.contract(&xf.contract(self.theta())).scale_int(parity((r + 1) * s));
        &head + &inner.d()
    }

    /// The Poisson bracket of two Poisson forms, Lie-derivative form.
    pub fn poisson_bracket(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Result<BracketResult> {
        self.check_poisson_pair(f)?;
        self.check_poisson_pair(g)?;
        Ok(BracketResult {
            value: self.main_bracket_value(f, g),
            inputs: (f.clone(), g.clone()),
            formula: BracketFormula::Main,
        })
    }

    /// The same bracket as [`Multiphase::poisson_bracket`], written as the
    /// primed bracket plus an exact correction.
    pub fn poisson_bracket_alt(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Result<BracketResult> {
        self.check_poisson_pair(f)?;
        self.check_poisson_pair(g)?;
        Ok(BracketResult {
            value: self.main_bracket_alt_value(f, g),
            inputs: (f.clone(), g.clone()),
            formula: BracketFormula::MainAlt,
        })
    }

    /// Exact correction `{f,g} − {f,g}′`, as the form whose `d` it is.
    pub fn bracket_correction_potential(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Form {
        let (xf, xg) = (f.field(), g.field());
        let (r, s) = (xf.degree(), xg.degree());
        &(&xg.contract(f.form()).scale_int(shifted(r, s)) - &xf.contract(g.form()))
            - &xg.contract(&xf.contract(self.theta())).scale_int(parity((r + 1) * s))
    }

    /// Both sides of the primed-bracket Jacobi anomaly: the signed cyclic
    /// sum, and `c · d(i(X_f) i(X_g) i(X_h) ω)`.
    pub fn jacobi_anomaly(
        &self,
        f: &HamiltonianPair,
        g: &HamiltonianPair,
        h: &HamiltonianPair,
    ) -> Result<(Form, Form)> {
        for p in [f, g, h] {
            self.check_pair(p)?;
        }
        let (r, s, t) = (f.r(), g.r(), h.r());
        let term = |a: &HamiltonianPair, b: &HamiltonianPair, c: &HamiltonianPair| -> Form {
            // {b,c}′ has field [X_c, X_b]
            let inner = schouten(c.field(), b.field());
            contraction_term(a.field(), &inner, self.omega())
        };
        let lhs = &(&term(f, g, h).scale_int(shifted(r, t)) + &term(g, h, f).scale_int(shifted(s, r)))
            + &term(h, f, g).scale_int(shifted(t, s));
        let triple = f.field().contract(&g.field().contract(&h.field().contract(self.omega())));
        let rhs = triple.d().scale_int(jacobi_anomaly_sign(r, s, t));
        Ok((lhs, rhs))
    }

    /// Both sides of the momentum-map defect for exact `X, Y`:
    /// `{J(X),J(Y)}′ − J([Y,X])` and `c · d(i(Y) i(X) θ)`.
    pub fn equivariance_defect(&self, x: &MultiVector, y: &MultiVector) -> Result<(Form, Form)> {
        let fx = self.exact_pair(x)?;
        let fy = self.exact_pair(y)?;
        let primed = self.primed_bracket(&fx, &fy)?.value;
        let lhs = &primed - &self.j_form(&schouten(y, x));
        let (r, s) = (x.degree(), y.degree());
        let rhs = y.contract(&x.contract(self.theta())).d().scale_int(equivariance_sign(r, s));
        Ok((lhs, rhs))
    }

    /// `(−1)^r i(X̃_f) i(X̃_g) ω^V` for Kanatchikov pairs on the ordinary space.
    pub fn kanatchikov_bracket(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Result<Form> {
        for p in [f, g] {
            if !self.verify_kanatchikov(p.field(), p.form())? {
                return Err(Error::InvalidPair);
            }
        }
        Ok(contraction_term(f.field(), g.field(), self.omega_v()))
    }

    /// `L_{X_f∧X_g} ω` and `d{f,g}`; they agree up to
    /// [`crate::conventions::wedge_obstruction_sign`].
    pub fn wedge_obstruction(&self, f: &HamiltonianPair, g: &HamiltonianPair) -> Result<(Form, Form)> {
        self.check_pair(f)?;
        self.check_pair(g)?;
        let lhs = f.field().wedge(g.field()).lie_derivative(self.omega());
        let rhs = self.main_bracket_value(f, g).d();
        Ok((lhs, rhs))
    }
}

/// Kanatchikov's product `∗⁻¹(∗f ∧ ∗g)` of horizontal forms. The degree is
/// `deg f + deg g − n`; when that is negative the result is the zero form
/// of degree 0.
pub fn bullet(f: &Form, g: &Form, metric: Metric) -> Result<Form> {
    if f.space() != g.space() {
        return Err(Error::SpaceMismatch);
    }
    if !f.is_horizontal() || !g.is_horizontal() {
        return Err(Error::NotHorizontal);
    }
    let space = f.space();
    let n = space.n();
    if f.degree() + g.degree() < n {
        return Ok(Form::zero(space, 0));
    }
    let wedge = hodge(f, metric, false)?.wedge(&hodge(g, metric, false)?);
    let out = hodge(&wedge, metric, true)?;
    if out.is_zero() {
        return Ok(Form::zero(space, f.degree() + g.degree() - n));
    }
    Ok(out)
}

/// Short human-readable label, e.g. `"main(r=2,s=1)"`.
pub fn describe(result: &BracketResult) -> String {
    alloc::format!("{}(r={},s={})", result.formula.name(), result.inputs.0.r(), result.inputs.1.r())
}
