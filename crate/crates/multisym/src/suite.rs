//! Registered identities and the seeded suite runner.
//!
//! Every identity gets its own random stream, so selecting a subset of
//! identities does not change the instances of the others, and identical
//! configurations give byte-identical reports.

use std::fmt;
use std::thread;

use multisym_core::brackets::bullet;
use multisym_core::conventions::{parity, shifted, wedge_obstruction_sign};
use multisym_core::exterior::all_blades;
use multisym_core::field_theory::{equivalence_check, FieldConfiguration, LagrangianDensity};
use multisym_core::hamiltonian::HamiltonianPair;
use multisym_core::multiphase::{horizontal_volume, project_horizontal, pullback_horizontal};
use multisym_core::scalar::Rational;
use multisym_core::schouten::{lie_bracket, schouten};
use multisym_core::{Error, Flavor, Form, GradedObject, Metric, MultiVector, Multiphase, PhaseSpace, Scalar};
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::expr::{parse_expr, print_expr};
use crate::generate::Generator;
use crate::report::{Case, Report, Status};

/// `(name, description)` of every registered identity, in run order.
pub const IDENTITIES: &[(&str, &str)] = &[
    ("structure", "ω = −dθ, i(Σ)ω = −θ, dω = 0, ω non-degenerate on vectors, kernel non-trivial in degree ≥ 2"),
    ("schouten_axioms", "Lie bracket on vectors, [v,g] = v(g), derivation rule in the second slot"),
    ("schouten_antisymmetry", "[Y,X] = −(−1)^{(r−1)(s−1)} [X,Y]"),
    ("schouten_jacobi", "graded Jacobi identity of the Schouten bracket"),
    ("lie_of_bracket", "L_[X,Y] = (−1)^{(r−1)(s−1)} L_X L_Y − L_Y L_X on test forms"),
    ("jacobi_primed", "cyclic sum of the contraction bracket equals the exact anomaly"),
    ("equivariance", "{J(X),J(Y)}′ − J([Y,X]) equals the exact defect"),
    ("choice_independence", "{f,g} is unchanged when X_f, X_g move by kernel elements"),
    ("bracket_field", "[X_g, X_f] is a Hamiltonian field of {f,g}"),
    ("closure", "{f,g} is a Poisson form"),
    ("antisymmetry_main", "{g,f} = −(−1)^{(r−1)(s−1)} {f,g}"),
    ("jacobi_main", "graded Jacobi identity of the corrected bracket"),
    ("momentum_homomorphism", "{J(X), J(Y)} = J([Y,X]) for exact fields"),
    ("kanatchikov_pullback", "Kanatchikov bracket pulls back to the corrected bracket"),
    ("formulas_agree", "Lie-derivative and contraction forms of the bracket agree"),
    ("momentum_map_sigma", "J(X) = i(X∧Σ)ω for exact fields"),
    ("mechanics_reduction", "n = 1 bracket on functions equals the symplectic-inversion bracket"),
    ("bullet_functions", "f • g = 0 for horizontal functions"),
    ("bullet_unit", "f • dⁿx = f"),
    ("wedge_obstruction", "L_{X_f∧X_g} ω = σ d{f,g}"),
    ("bullet_counterexample", "X_f∧X_g is not a Hamiltonian field of f • g in general"),
    ("dw_equivalence", "Euler–Lagrange and De Donder–Weyl residuals vanish together"),
    ("degree_bound", "horizontal Poisson k-forms have multimomentum degree ≤ n − k"),
    ("round_trip", "parse(print(o)) = o"),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub fields: usize,
    pub seed: u64,
    /// Maximum polynomial degree of generated coefficients.
    pub degree: usize,
    /// Instances per identity.
    pub cases: usize,
    /// Identities to run; empty means all.
    pub identities: Vec<String>,
    pub metric: Metric,
    /// Test mode: perturb the right-hand side of this identity.
    pub corrupt: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 2,
            fields: 1,
            seed: 0,
            degree: 2,
            cases: 25,
            identities: Vec::new(),
            metric: Metric::Euclidean,
            corrupt: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuiteError {
    UnknownIdentity { name: String, available: Vec<&'static str> },
    InvalidConfig(String),
    Core(Error),
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::UnknownIdentity { name, available } => {
                write!(f, "unknown identity '{name}'; available: {}", available.join(", "))
            }
            SuiteError::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            SuiteError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SuiteError {}

impl From<Error> for SuiteError {
    fn from(e: Error) -> Self {
        SuiteError::Core(e)
    }
}

fn known(name: &str) -> Option<&'static str> {
    IDENTITIES.iter().map(|(n, _)| *n).find(|n| *n == name)
}

fn lookup(name: &str) -> Result<&'static str, SuiteError> {
    known(name).ok_or_else(|| SuiteError::UnknownIdentity {
        name: name.to_string(),
        available: IDENTITIES.iter().map(|(n, _)| *n).collect(),
    })
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<Vec<&'static str>, SuiteError> {
        if self.n == 0 || self.fields == 0 {
            return Err(SuiteError::InvalidConfig(format!("n={} and N={} must be positive", self.n, self.fields)));
        }
        if self.cases == 0 {
            return Err(SuiteError::InvalidConfig("instance count must be positive".into()));
        }
        if let Some(c) = &self.corrupt {
            lookup(c)?;
        }
        if self.identities.is_empty() {
            return Ok(IDENTITIES.iter().map(|(n, _)| *n).collect());
        }
        let mut out = Vec::new();
        for name in &self.identities {
            let id = lookup(name)?;
            if !out.contains(&id) {
                out.push(id);
            }
        }
        // run order is registry order
        out.sort_by_key(|id| IDENTITIES.iter().position(|(n, _)| n == id));
        Ok(out)
    }
}

/// Runs the selected identities. Identities run on separate threads; the
/// report lists them in registry order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, SuiteError> {
    let ids = cfg.validate()?;
    let results: Vec<Result<Vec<Case>, SuiteError>> = thread::scope(|scope| {
        let handles: Vec<_> = ids.iter().map(|id| scope.spawn(move || run_identity(cfg, id))).collect();
        handles.into_iter().map(|h| h.join().expect("identity runner panicked")).collect()
    });
    let mut cases = Vec::new();
    for r in results {
        cases.extend(r?);
    }
    let suite = if cfg.identities.is_empty() { "default".to_string() } else { ids.join(",") };
    Ok(Report::new(&suite, cfg.seed, cfg.n, cfg.fields, cases))
}

/// Cases for a single identity.
pub fn run_identity(cfg: &SuiteConfig, name: &str) -> Result<Vec<Case>, SuiteError> {
    let id = lookup(name)?;
    let m = Multiphase::new(cfg.n, cfg.fields)?;
    let mut ctx = Ctx {
        m,
        gen: Generator::new(cfg.seed, id, cfg.degree),
        cfg,
        id,
        corrupt: cfg.corrupt.as_deref() == Some(id),
        cases: Vec::new(),
    };
    match id {
        "structure" => ctx.structure(),
        "schouten_axioms" => ctx.schouten_axioms(),
        "schouten_antisymmetry" => ctx.schouten_antisymmetry(),
        "schouten_jacobi" => ctx.schouten_jacobi(),
        "lie_of_bracket" => ctx.lie_of_bracket(),
        "jacobi_primed" => ctx.jacobi_primed(),
        "equivariance" => ctx.equivariance(),
        "choice_independence" => ctx.choice_independence(),
        "bracket_field" => ctx.bracket_field(),
        "closure" => ctx.closure(),
        "antisymmetry_main" => ctx.antisymmetry_main(),
        "jacobi_main" => ctx.jacobi_main(),
        "momentum_homomorphism" => ctx.momentum_homomorphism(),
        "kanatchikov_pullback" => ctx.kanatchikov_pullback(),
        "formulas_agree" => ctx.formulas_agree(),
        "momentum_map_sigma" => ctx.momentum_map_sigma(),
        "mechanics_reduction" => ctx.mechanics_reduction(),
        "bullet_functions" => ctx.bullet_functions(),
        "bullet_unit" => ctx.bullet_unit(),
        "wedge_obstruction" => ctx.wedge_obstruction(),
        "bullet_counterexample" => ctx.bullet_counterexample(),
        "dw_equivalence" => ctx.dw_equivalence(),
        "degree_bound" => ctx.degree_bound(),
        "round_trip" => ctx.round_trip(),
        _ => unreachable!("registry and dispatch list differ"),
    }?;
    Ok(ctx.cases)
}

fn params(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

/// A nonzero constant object of the same variance and degree, used to
/// corrupt an identity on purpose.
fn perturbation(like: &GradedObject) -> GradedObject {
    let space = like.space();
    let k = like.degree().min(space.dim());
    let blade: Vec<usize> = (0..k).collect();
    match like {
        GradedObject::Form(_) => GradedObject::Form(Form::basis(space, &blade)),
        GradedObject::MultiVector(_) => GradedObject::MultiVector(MultiVector::basis(space, &blade)),
    }
}

fn difference(a: &GradedObject, b: &GradedObject) -> Result<GradedObject, Error> {
    match (a, b) {
        (GradedObject::Form(a), GradedObject::Form(b)) => {
            if a.is_zero() {
                Ok(GradedObject::Form(-b))
            } else if b.is_zero() {
                Ok(GradedObject::Form(a.clone()))
            } else {
                a.checked_sub(b).map(GradedObject::Form)
            }
        }
        (GradedObject::MultiVector(a), GradedObject::MultiVector(b)) => {
            if a.is_zero() {
                Ok(GradedObject::MultiVector(-b))
            } else if b.is_zero() {
                Ok(GradedObject::MultiVector(a.clone()))
            } else {
                a.checked_sub(b).map(GradedObject::MultiVector)
            }
        }
        _ => Err(Error::MixedVariance),
    }
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    id: &'static str,
    m: Multiphase,
    gen: Generator,
    corrupt: bool,
    cases: Vec<Case>,
}

impl<'a> Ctx<'a> {
    fn push(&mut self, p: Value, ok: bool, residual: Option<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        let residual = if ok { None } else { residual };
        self.cases.push(Case { identity: self.id.to_string(), params: params(p), status, residual });
    }

    /// Records `lhs == rhs`; the residual is `lhs − rhs`.
    fn compare(&mut self, p: Value, lhs: GradedObject, rhs: GradedObject) {
        record_comparison(&mut self.cases, self.id, self.corrupt, p, lhs, rhs);
    }

    fn compare_forms(&mut self, p: Value, lhs: &Form, rhs: &Form) {
        self.compare(p, GradedObject::Form(lhs.clone()), GradedObject::Form(rhs.clone()));
    }

    fn compare_vectors(&mut self, p: Value, lhs: &MultiVector, rhs: &MultiVector) {
        self.compare(p, GradedObject::MultiVector(lhs.clone()), GradedObject::MultiVector(rhs.clone()));
    }

    /// Records a predicate; `detail` explains a failure.
    fn holds(&mut self, p: Value, ok: bool, detail: impl FnOnce() -> String) {
        let ok = ok != self.corrupt;
        let residual = if ok { None } else { Some(detail()) };
        self.push(p, ok, residual);
    }

    fn space(&self) -> PhaseSpace {
        self.m.extended()
    }

    fn poisson_pair(&mut self, r: usize) -> HamiltonianPair {
        let m = &self.m;
        self.gen.poisson_pair_of_degree(m, r)
    }

    /// Pairs whose degrees make a bracket of them non-trivial most of the
    /// time; `slack` raises the allowed degree sum above `n + 1`.
    fn poisson_pairs(&mut self, k: usize, slack: usize) -> Vec<HamiltonianPair> {
        let n = self.m.n();
        let d = self.gen.degrees(n, k, n + 1 + slack);
        d.into_iter().map(|r| self.poisson_pair(r)).collect()
    }

    fn two_pairs(&mut self) -> (HamiltonianPair, HamiltonianPair) {
        let mut v = self.poisson_pairs(2, 0);
        let g = v.pop().unwrap();
        (v.pop().unwrap(), g)
    }

    fn random_degree(&mut self, max: usize) -> usize {
        self.gen.below(max + 1)
    }

    fn structure(&mut self) -> Result<(), SuiteError> {
        let m = &self.m;
        let (theta, omega, sigma) = (m.theta().clone(), m.omega().clone(), m.sigma().clone());
        let dim = self.space().dim();
        let n = m.n();
        self.compare_forms(json!({"check": "omega_minus_dtheta"}), &omega, &-theta.d());
        self.compare_forms(json!({"check": "euler_contraction"}), &sigma.contract(&omega), &-&theta);
        self.compare_forms(json!({"check": "omega_closed"}), &omega.d(), &Form::zero(self.space(), n + 2));
        let rank = self.m.omega_solver().rank(1);
        self.holds(json!({"check": "nondegenerate", "k": 1, "rank": rank}), rank == dim, || {
            format!("rank of X ↦ i(X)ω on vectors is {rank}, expected {dim}")
        });
        for k in 2..=n {
            let kernel = self.m.omega_kernel_basis(k)?;
            let dimension = kernel.len();
            let annihilated = kernel.iter().all(|b| b.contract(self.m.omega()).is_zero());
            self.holds(
                json!({"check": "kernel_nontrivial", "k": k, "kernel_dim": dimension}),
                dimension > 0 && annihilated,
                || format!("kernel in degree {k} has dimension {dimension}"),
            );
        }
        Ok(())
    }

    fn schouten_axioms(&mut self) -> Result<(), SuiteError> {
        let s = self.space();
        for i in 0..self.cfg.cases {
            let v = self.gen.multivector(s, 1);
            let w = self.gen.multivector(s, 1);
            // component formula [v,w]^k = v(w^k) − w(v^k)
            let mut oracle = MultiVector::zero(s, 1);
            for k in 0..s.dim() {
                let c = &v.apply(&w.component(k)) - &w.apply(&v.component(k));
                oracle += &MultiVector::monomial(c, &[k]);
            }
            self.compare_vectors(json!({"instance": i, "rule": "lie"}), &lie_bracket(&v, &w), &oracle);
            let all: Vec<usize> = (0..s.dim()).collect();
            let g = self.gen.polynomial(s, &all, 3, self.gen.degree());
            let vg = schouten(&v, &MultiVector::from_scalar(g.clone()));
            self.compare_vectors(
                json!({"instance": i, "rule": "function"}),
                &vg,
                &MultiVector::from_scalar(v.apply(&g)),
            );
            let (r, t) = (self.random_degree(2), self.random_degree(2));
            let x = self.gen.multivector(s, r);
            let y = self.gen.multivector(s, t);
            let w_deg = self.gen.below(2) + 1;
            let z = self.gen.multivector(s, w_deg);
            let lhs = schouten(&x, &y.wedge(&z));
            let rhs = &schouten(&x, &y).wedge(&z) + &y.wedge(&schouten(&x, &z)).scale_int(parity((r + 1) * t));
            self.compare_vectors(json!({"instance": i, "rule": "derivation", "r": r, "s": t}), &lhs, &rhs);
        }
        Ok(())
    }

    fn schouten_antisymmetry(&mut self) -> Result<(), SuiteError> {
        let s = self.space();
        for i in 0..self.cfg.cases {
            let (r, t) = (self.random_degree(3), self.random_degree(3));
            let x = self.gen.multivector(s, r);
            let y = self.gen.multivector(s, t);
            let lhs = schouten(&y, &x);
            let rhs = schouten(&x, &y).scale_int(-shifted(r, t));
            self.compare_vectors(json!({"instance": i, "r": r, "s": t}), &lhs, &rhs);
        }
        Ok(())
    }

    fn schouten_jacobi(&mut self) -> Result<(), SuiteError> {
        let s = self.space();
        for i in 0..self.cfg.cases {
            let (r, u, t) = (1 + self.random_degree(2), 1 + self.random_degree(2), 1 + self.random_degree(2));
            let x = self.gen.multivector(s, r);
            let y = self.gen.multivector(s, u);
            let z = self.gen.multivector(s, t);
            let a = schouten(&x, &schouten(&y, &z)).scale_int(shifted(r, t));
            let b = schouten(&y, &schouten(&z, &x)).scale_int(shifted(u, r));
            let c = schouten(&z, &schouten(&x, &y)).scale_int(shifted(t, u));
            let sum = &(&a + &b) + &c;
            let zero = MultiVector::zero(s, sum.degree());
            self.compare_vectors(json!({"instance": i, "r": r, "s": u, "t": t}), &sum, &zero);
        }
        Ok(())
    }

    fn lie_of_bracket(&mut self) -> Result<(), SuiteError> {
        let s = self.space();
        for i in 0..self.cfg.cases {
            let (r, t) = (1 + self.random_degree(1), 1 + self.random_degree(1));
            let x = self.gen.multivector(s, r);
            let y = self.gen.multivector(s, t);
            let k = self.random_degree(3);
            let alpha = self.gen.form(s, k);
            let lhs = schouten(&x, &y).lie_derivative(&alpha);
            let rhs = &x.lie_derivative(&y.lie_derivative(&alpha)).scale_int(shifted(r, t))
                - &y.lie_derivative(&x.lie_derivative(&alpha));
            self.compare_forms(json!({"instance": i, "r": r, "s": t, "k": k}), &lhs, &rhs);
        }
        Ok(())
    }

    fn jacobi_primed(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let v = self.poisson_pairs(3, 0);
            let (f, g, h) = (&v[0], &v[1], &v[2]);
            let (lhs, rhs) = self.m.jacobi_anomaly(f, g, h)?;
            let p = json!({"instance": i, "r": f.r(), "s": g.r(), "t": h.r(), "nonzero": !lhs.is_zero()});
            self.compare_forms(p, &lhs, &rhs);
        }
        Ok(())
    }

    fn equivariance(&mut self) -> Result<(), SuiteError> {
        let n = self.m.n();
        for i in 0..self.cfg.cases {
            let d = self.gen.degrees(n, 2, n + 1);
            let (r, t) = (d[0], d[1]);
            let x = self.gen.exact_field(&self.m, r);
            let y = self.gen.exact_field(&self.m, t);
            let (lhs, rhs) = self.m.equivariance_defect(&x, &y)?;
            let p = json!({"instance": i, "r": r, "s": t, "nonzero": !lhs.is_zero()});
            self.compare_forms(p, &lhs, &rhs);
        }
        Ok(())
    }

    /// Shifts the field of a degree-`r ≥ 2` pair by kernel elements; the
    /// partner has degree `1..=n+1−r` so the bracket can be nonzero.
    fn choice_independence(&mut self) -> Result<(), SuiteError> {
        let n = self.m.n();
        for i in 0..self.cfg.cases {
            let r = if n >= 2 { 2 + self.gen.below(n - 1) } else { 1 };
            let s = 1 + self.gen.below((n + 1 - r).max(1));
            let f = self.poisson_pair(r);
            let g = self.poisson_pair(s);
            let shift_f = self.gen.kernel_shift(&self.m, f.r());
            let shift_g = self.gen.kernel_shift(&self.m, g.r());
            let f2 = self.m.pair(f.form().clone(), f.field() + &shift_f)?;
            let g2 = self.m.pair(g.form().clone(), g.field() + &shift_g)?;
            let (fg, gf) = if i % 2 == 0 { ((&f, &g), (&f2, &g2)) } else { ((&g, &f), (&g2, &f2)) };
            let a = self.m.poisson_bracket(fg.0, fg.1)?.value;
            let b = self.m.poisson_bracket(gf.0, gf.1)?.value;
            let shifted = !(shift_f.is_zero() && shift_g.is_zero());
            let p = json!({"instance": i, "r": fg.0.r(), "s": fg.1.r(), "shifted": shifted, "nonzero": !a.is_zero()});
            self.compare_forms(p, &a, &b);
        }
        Ok(())
    }

    fn bracket_field(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let (f, g) = self.two_pairs();
            let b = self.m.poisson_bracket(&f, &g)?;
            let x = b.field();
            let lhs = x.contract(self.m.omega());
            let p = json!({"instance": i, "r": f.r(), "s": g.r(), "nonzero": !b.value.is_zero()});
            if !x.is_zero() && !b.value.is_zero() && x.degree() + b.value.degree() != self.m.n() {
                self.push(p, false, Some("degrees of {f,g} and [X_g,X_f] do not add up to n".into()));
                continue;
            }
            self.compare_forms(p, &lhs, &b.value.d());
        }
        Ok(())
    }

    fn closure(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let (f, g) = self.two_pairs();
            let b = self.m.poisson_bracket(&f, &g)?.value;
            let verdict = self.m.is_poisson(&b);
            let p = json!({"instance": i, "r": f.r(), "s": g.r(), "nonzero": !b.is_zero()});
            self.holds(p, verdict.is_ok(), || match verdict {
                Err(e) => format!("{e}: {}", print_expr(&GradedObject::Form(b.clone()))),
                Ok(_) => "corrupted".into(),
            });
        }
        Ok(())
    }

    fn antisymmetry_main(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let (f, g) = self.two_pairs();
            let fg = self.m.poisson_bracket(&f, &g)?.value;
            let gf = self.m.poisson_bracket(&g, &f)?.value;
            let p = json!({"instance": i, "r": f.r(), "s": g.r(), "nonzero": !fg.is_zero()});
            self.compare_forms(p, &gf, &fg.scale_int(-shifted(f.r(), g.r())));
        }
        Ok(())
    }

    fn jacobi_main(&mut self) -> Result<(), SuiteError> {
        let m = &self.m;
        for i in 0..self.cfg.cases {
            let d = self.gen.degrees(m.n(), 3, m.n() + 2);
            let f = self.gen.poisson_pair_of_degree(m, d[0]);
            let g = self.gen.poisson_pair_of_degree(m, d[1]);
            let h = self.gen.poisson_pair_of_degree(m, d[2]);
            let (r, s, t) = (f.r(), g.r(), h.r());
            let br = |a: &HamiltonianPair, b: &HamiltonianPair| m.poisson_bracket(a, b).map(|x| x.pair());
            let a = m.poisson_bracket(&f, &br(&g, &h)?)?.value.scale_int(shifted(r, t));
            let b = m.poisson_bracket(&g, &br(&h, &f)?)?.value.scale_int(shifted(s, r));
            let c = m.poisson_bracket(&h, &br(&f, &g)?)?.value.scale_int(shifted(t, s));
            let nonzero = !(a.is_zero() && b.is_zero() && c.is_zero());
            let sum = &(&a + &b) + &c;
            let zero = Form::zero(m.extended(), sum.degree());
            let p = json!({"instance": i, "r": r, "s": s, "t": t, "nonzero": nonzero});
            let (lhs, rhs) = (GradedObject::Form(sum), GradedObject::Form(zero));
            record_comparison(&mut self.cases, self.id, self.corrupt, p, lhs, rhs);
        }
        Ok(())
    }

    fn momentum_homomorphism(&mut self) -> Result<(), SuiteError> {
        let n = self.m.n();
        for i in 0..self.cfg.cases {
            let d = self.gen.degrees(n, 2, n + 1);
            let (r, t) = (d[0], d[1]);
            let x = self.gen.exact_field(&self.m, r);
            let y = self.gen.exact_field(&self.m, t);
            let fx = self.m.exact_pair(&x)?;
            let fy = self.m.exact_pair(&y)?;
            let lhs = self.m.poisson_bracket(&fx, &fy)?.value;
            let rhs = self.m.j_form(&schouten(&y, &x));
            self.compare_forms(json!({"instance": i, "r": r, "s": t, "nonzero": !lhs.is_zero()}), &lhs, &rhs);
        }
        Ok(())
    }

    fn kanatchikov_input(&mut self) -> Form {
        if self.gen.below(3) == 0 {
            self.gen.horizontal_function(&self.m)
        } else {
            self.gen.kanatchikov_form(&self.m)
        }
    }

    fn kanatchikov_pullback(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let a = self.kanatchikov_input();
            let b = self.kanatchikov_input();
            let ka = self.m.solve_kanatchikov(&a)?;
            let kb = self.m.solve_kanatchikov(&b)?;
            let k = self.m.kanatchikov_bracket(&ka, &kb)?;
            let pa = self.m.solve_hamiltonian(&pullback_horizontal(&a)?)?;
            let pb = self.m.solve_hamiltonian(&pullback_horizontal(&b)?)?;
            let main = self.m.poisson_bracket(&pa, &pb)?.value;
            let p = json!({"instance": i, "deg_f": a.degree(), "deg_g": b.degree(), "nonzero": !main.is_zero()});
            self.compare_forms(p, &pullback_horizontal(&k)?, &main);
        }
        Ok(())
    }

    fn formulas_agree(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let (f, g) = self.two_pairs();
            let a = self.m.poisson_bracket(&f, &g)?.value;
            let b = self.m.poisson_bracket_alt(&f, &g)?.value;
            self.compare_forms(json!({"instance": i, "r": f.r(), "s": g.r(), "nonzero": !a.is_zero()}), &a, &b);
        }
        Ok(())
    }

    fn momentum_map_sigma(&mut self) -> Result<(), SuiteError> {
        let n = self.m.n();
        for i in 0..self.cfg.cases {
            let r = 1 + self.gen.below(n);
            let x = self.gen.exact_field(&self.m, r);
            let via_sigma = x.wedge(self.m.sigma()).contract(self.m.omega());
            let j = self.m.j_form(&x);
            self.compare_forms(json!({"instance": i, "r": r}), &j, &via_sigma);
        }
        Ok(())
    }

    /// Extended mechanics `(t, q^i, P_i, E)`: the Hamiltonian vector field
    /// from inverting the constant matrix of `ω`, and the bracket
    /// `X_f(g)` with `i(X_f)ω = df`, against the corrected bracket.
    fn mechanics_reduction(&mut self) -> Result<(), SuiteError> {
        let mech = Multiphase::new(1, self.cfg.fields)?;
        let s = mech.extended();
        let dim = s.dim();
        let mut w = vec![vec![Rational::zero(); dim]; dim];
        for (a, row) in w.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                let pair = MultiVector::basis(s, &[b]).contract(&MultiVector::basis(s, &[a]).contract(mech.omega()));
                *entry = pair.as_scalar().constant_term();
            }
        }
        let inv = invert(w).ok_or_else(|| SuiteError::InvalidConfig("ω is singular on vectors".into()))?;
        let all: Vec<usize> = (0..dim).collect();
        for i in 0..self.cfg.cases {
            let f = self.gen.polynomial(s, &all, 3, self.gen.degree() + 1);
            let g = self.gen.polynomial(s, &all, 3, self.gen.degree() + 1);
            let pf = mech.solve_hamiltonian(&Form::from_scalar(f.clone()))?;
            let pg = mech.solve_hamiltonian(&Form::from_scalar(g.clone()))?;
            let bracket = mech.poisson_bracket(&pf, &pg)?.value;
            // X^a ω_ab = ∂_b f, so X^a = Σ_b ∂_b f (ω⁻¹)_ba, and {f,g} = −X_f(g)
            let mut oracle = Scalar::zero(s);
            for a in 0..dim {
                let mut xa = Scalar::zero(s);
                for (b, row) in inv.iter().enumerate() {
                    xa += &f.derivative(b).scale(&row[a]);
                }
                oracle -= &(&xa * &g.derivative(a));
            }
            let p = json!({"instance": i, "n": 1, "N": self.cfg.fields});
            let (lhs, rhs) = (GradedObject::Form(bracket), GradedObject::Form(Form::from_scalar(oracle)));
            record_comparison(&mut self.cases, self.id, self.corrupt, p, lhs, rhs);
        }
        Ok(())
    }

    fn bullet_functions(&mut self) -> Result<(), SuiteError> {
        let o = self.m.ordinary();
        let xq: Vec<usize> = (0..self.m.n() + self.m.fields()).collect();
        for i in 0..self.cfg.cases {
            let f = self.gen.horizontal_function(&self.m);
            let g = Form::from_scalar(self.gen.polynomial(o, &xq, 3, self.gen.degree()));
            let fg = bullet(&f, &g, self.cfg.metric)?;
            let zero = Form::zero(o, 0);
            self.compare_forms(json!({"instance": i}), &fg, &zero);
        }
        Ok(())
    }

    /// Random horizontal `k`-form on the ordinary space with coefficients
    /// of multimomentum degree at most `momentum_degree`.
    fn horizontal_form(&mut self, k: usize, momentum_degree: usize) -> Form {
        let o = self.m.ordinary();
        let (n, nf) = (self.m.n(), self.m.fields());
        let xq: Vec<usize> = (0..n + nf).collect();
        let ps: Vec<usize> = (n + nf..o.dim()).collect();
        let blades = all_blades(n, k);
        let mut f = Form::zero(o, k);
        for _ in 0..1 + self.gen.below(2) {
            let b = &blades[self.gen.below(blades.len())];
            let mut c = self.gen.polynomial(o, &xq, 2, self.gen.degree());
            if momentum_degree > 0 {
                let d = 1 + self.gen.below(momentum_degree);
                c = &c * &self.gen.polynomial(o, &ps, 1, d);
            }
            let idx: Vec<usize> = b.indices().collect();
            f += &Form::monomial(c, &idx);
        }
        f
    }

    fn bullet_unit(&mut self) -> Result<(), SuiteError> {
        let o = self.m.ordinary();
        let n = self.m.n();
        let vol = horizontal_volume(o, None)?;
        for i in 0..self.cfg.cases {
            let k = self.gen.below(n + 1);
            let f = self.horizontal_form(k, 1);
            let fv = bullet(&f, &vol, self.cfg.metric)?;
            self.compare_forms(json!({"instance": i, "k": k}), &fv, &f);
        }
        Ok(())
    }

    fn wedge_obstruction(&mut self) -> Result<(), SuiteError> {
        for i in 0..self.cfg.cases {
            let (f, g) = self.two_pairs();
            let (lhs, rhs) = self.m.wedge_obstruction(&f, &g)?;
            let sign = wedge_obstruction_sign(f.r(), g.r());
            let p = json!({"instance": i, "r": f.r(), "s": g.r(), "sign": sign, "nonzero": !lhs.is_zero()});
            self.compare_forms(p, &lhs, &rhs.scale_int(sign));
        }
        Ok(())
    }

    /// Stored instance on `n = 2`: `f = p⁰dx¹ − p¹dx⁰`, `g = q dx¹` with
    /// `f • g = −q p¹`.
    fn bullet_counterexample(&mut self) -> Result<(), SuiteError> {
        let m = Multiphase::new(2, 1)?;
        let o = m.ordinary();
        let text = |t: &str| parse_expr(t, o).ok().and_then(|x| x.into_form().ok());
        let (Some(f), Some(g), Some(expect)) =
            (text("p[0,1]*dx[1] - p[1,1]*dx[0]"), text("q[1]*dx[1]"), text("-q[1]*p[1,1]"))
        else {
            return Err(SuiteError::InvalidConfig("stored counterexample does not parse".into()));
        };
        let fg = bullet(&f, &g, Metric::Euclidean)?;
        self.compare_forms(json!({"check": "product", "n": 2}), &fg, &expect);
        let pf = m.solve_hamiltonian(&pullback_horizontal(&f)?)?;
        let pg = m.solve_hamiltonian(&pullback_horizontal(&g)?)?;
        let wedge = pf.field().wedge(pg.field());
        let target = pullback_horizontal(&fg)?;
        let separates = !m.verify_pair(&wedge, &target)?;
        self.holds(json!({"check": "wedge_of_fields", "n": 2}), separates, || {
            "X_f∧X_g is a Hamiltonian field of f • g".into()
        });
        Ok(())
    }

    fn dw_equivalence(&mut self) -> Result<(), SuiteError> {
        let (n, nf) = (self.cfg.n, self.cfg.fields);
        let jet = PhaseSpace::new(n, nf, Flavor::Jet)?;
        let signs: Vec<i64> = (0..n).map(|mu| self.cfg.metric.diagonal(mu)).collect();
        let l = LagrangianDensity::free_scalar(jet, &signs)?;
        let x = |mu: usize| Scalar::var(jet, mu);
        // harmonic basis for Σ_μ s_μ ∂²_μ
        let mut harmonic: Vec<Scalar> = vec![Scalar::one(jet)];
        for a in 0..n {
            harmonic.push(x(a));
            for b in a + 1..n {
                harmonic.push(&x(a) * &x(b));
                let sa = Scalar::from_int(jet, signs[a]);
                let sb = Scalar::from_int(jet, signs[b]);
                harmonic.push(&(&(&x(a) * &x(a)) * &sa) - &(&(&x(b) * &x(b)) * &sb));
            }
        }
        for i in 0..self.cfg.cases {
            let solution = i % 2 == 0;
            let phi: Vec<Scalar> = (0..nf)
                .map(|field| {
                    let mut s = Scalar::zero(jet);
                    for h in &harmonic {
                        if self.gen.below(2) == 0 {
                            s += &h.scale(&self.gen.coefficient());
                        }
                    }
                    if !solution && field == 0 {
                        // Σ s_μ ∂²_μ (x⁰)² = 2 s_0 ≠ 0
                        s += &(&x(0) * &x(0)).scale(&self.gen.coefficient());
                    }
                    s
                })
                .collect();
            let cfg = FieldConfiguration::new(phi)?;
            let r = equivalence_check(&l, &cfg)?;
            let ok = r.consistent() && r.euler_lagrange_zero == solution;
            let p = json!({"instance": i, "n": n, "solution": solution, "el_zero": r.euler_lagrange_zero, "dw_zero": r.dw_zero});
            self.holds(p, ok, || {
                let el: Vec<String> = r.euler_lagrange.iter().map(crate::expr::print_scalar).collect();
                format!("Euler–Lagrange residual [{}], De Donder–Weyl residual zero: {}", el.join(", "), r.dw_zero)
            });
        }
        Ok(())
    }

    /// Horizontal candidates of every form degree, including ones above the
    /// bound; each Poisson candidate is checked against `n − k`.
    fn degree_bound(&mut self) -> Result<(), SuiteError> {
        let n = self.m.n();
        let mut found = 0;
        let mut tried = 0;
        while found < self.cfg.cases && tried < 40 * self.cfg.cases {
            tried += 1;
            let pick = self.gen.below(4);
            let horizontal = match pick {
                0 => self.gen.kanatchikov_form(&self.m),
                1 => self.gen.horizontal_function(&self.m),
                2 => {
                    // bracket of two pulled-back generators, back on P̃
                    let a = self.kanatchikov_input();
                    let b = self.kanatchikov_input();
                    let pa = self.m.solve_hamiltonian(&pullback_horizontal(&a)?)?;
                    let pb = self.m.solve_hamiltonian(&pullback_horizontal(&b)?)?;
                    let v = self.m.poisson_bracket(&pa, &pb)?.value;
                    match project_horizontal(&v) {
                        Ok(h) if !h.is_zero() => h,
                        _ => continue,
                    }
                }
                _ => {
                    // functions only up to momentum degree n; see the ledger
                    let k = self.gen.below(n);
                    let limit = if k == 0 { n } else { n - k + 1 };
                    self.horizontal_form(k, limit)
                }
            };
            let f = pullback_horizontal(&horizontal)?;
            if self.m.solve_hamiltonian(&f).is_err() || self.m.is_poisson(&f).is_err() {
                continue;
            }
            found += 1;
            let k = f.degree();
            let degree = self.m.momentum_degree(&f);
            let bound = n - k.min(n);
            let p = json!({"instance": found - 1, "k": k, "momentum_degree": degree, "bound": bound, "family": pick});
            self.holds(p, degree <= bound, || {
                format!("momentum degree {degree} exceeds {bound}: {}", print_expr(&GradedObject::Form(f.clone())))
            });
        }
        if found < self.cfg.cases {
            self.push(json!({"check": "generation", "found": found}), false, Some("too few Poisson candidates".into()));
        }
        Ok(())
    }

    fn round_trip(&mut self) -> Result<(), SuiteError> {
        let s = self.space();
        for i in 0..self.cfg.cases {
            let k = self.gen.below(s.dim().min(4) + 1);
            let obj = if k > 0 && self.gen.below(2) == 0 {
                GradedObject::MultiVector(self.gen.multivector(s, k))
            } else {
                GradedObject::Form(self.gen.form(s, k))
            };
            let text = print_expr(&obj);
            let p = json!({"instance": i, "degree": k});
            match parse_expr(&text, s) {
                Ok(back) => self.compare(p, back, obj),
                Err(e) => self.push(p, false, Some(format!("{text}: {e}"))),
            }
        }
        Ok(())
    }
}

/// Shared by [`Ctx::compare`] and loops that keep `Ctx::m` borrowed.
fn record_comparison(cases: &mut Vec<Case>, id: &str, corrupt: bool, p: Value, lhs: GradedObject, rhs: GradedObject) {
    let rhs = if corrupt { difference(&rhs, &negated(&perturbation(&rhs))).unwrap_or(rhs) } else { rhs };
    let (status, residual) = match difference(&lhs, &rhs) {
        Ok(d) if d.is_zero() => (Status::Pass, None),
        Ok(d) => (Status::Fail, Some(print_expr(&d))),
        Err(e) => (Status::Fail, Some(format!("incomparable: {e}"))),
    };
    cases.push(Case { identity: id.to_string(), params: params(p), status, residual });
}

fn negated(x: &GradedObject) -> GradedObject {
    match x {
        GradedObject::Form(f) => GradedObject::Form(-f),
        GradedObject::MultiVector(v) => GradedObject::MultiVector(-v),
    }
}

/// Gauss–Jordan inverse over the rationals; `None` if singular.
fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
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
    Some(inv)
}
