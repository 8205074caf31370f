//! Seeded random objects for the verification suites.
//!
//! Poisson forms have measure zero among all forms, so they are built by
//! construction: momentum maps of exact fields, `−H − p` for polynomial `H`,
//! pullbacks of horizontal Kanatchikov forms and brackets of these.

use multisym_core::exterior::{Graded, Variance};
use multisym_core::hamiltonian::HamiltonianPair;
use multisym_core::multiphase::{horizontal_volume, pullback_horizontal};
use multisym_core::scalar::{rational, Monomial, Rational};
use multisym_core::{Blade, Form, MultiVector, Multiphase, PhaseSpace, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// FNV-1a, so that stream seeds do not depend on the std hasher.
fn stream_hash(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub struct Generator {
    rng: ChaCha8Rng,
    degree: usize,
}

impl Generator {
    /// Independent stream per `(seed, name)`.
    pub fn new(seed: u64, stream: &str, degree: usize) -> Self {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed ^ stream_hash(stream)), degree: degree.max(1) }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, bound: usize) -> usize {
        self.rng.gen_range(0..bound.max(1))
    }

    /// Nonzero coefficient, mostly small integers, sometimes halves.
    pub fn coefficient(&mut self) -> Rational {
        let num = *[-3i64, -2, -1, 1, 2, 3].choose(&mut self.rng).unwrap();
        let den = if self.rng.gen_bool(0.2) { 2 } else { 1 };
        rational(num, den)
    }

    /// Nonzero polynomial in the coordinates `vars`, total degree at most
    /// `degree`.
    pub fn polynomial(&mut self, space: PhaseSpace, vars: &[usize], max_terms: usize, degree: usize) -> Scalar {
        loop {
            let terms = 1 + self.below(max_terms);
            let mut out = Scalar::zero(space);
            for _ in 0..terms {
                let mut e = vec![0u16; space.dim()];
                if !vars.is_empty() {
                    let d = self.below(degree + 1);
                    for _ in 0..d {
                        e[*vars.choose(&mut self.rng).unwrap()] += 1;
                    }
                }
                let c = self.coefficient();
                out += &Scalar::from_terms(space, [(Monomial::from_exponents(e), c)]);
            }
            if !out.is_zero() {
                return out;
            }
        }
    }

    fn graded<V: Variance>(&mut self, space: PhaseSpace, k: usize, max_terms: usize) -> Graded<V> {
        let dim = space.dim();
        let all: Vec<usize> = (0..dim).collect();
        loop {
            let mut terms = Vec::new();
            for _ in 0..1 + self.below(max_terms) {
                let idx: Vec<usize> = all.choose_multiple(&mut self.rng, k).copied().collect();
                let (sign, blade) = Blade::normalize(&idx).unwrap();
                let c = self.polynomial(space, &all, 2, self.degree).scale(&rational(sign, 1));
                terms.push((blade, c));
            }
            let out = Graded::from_terms(space, k, terms);
            if !out.is_zero() {
                return out;
            }
        }
    }

    pub fn multivector(&mut self, space: PhaseSpace, k: usize) -> MultiVector {
        self.graded(space, k, 3)
    }

    pub fn form(&mut self, space: PhaseSpace, k: usize) -> Form {
        self.graded(space, k, 3)
    }

    /// `ξ^μ(x) ∂_μ + ξ^i(x,q) ∂_{q^i}`, nonzero.
    pub fn projectable_field(&mut self, m: &Multiphase) -> MultiVector {
        let s = m.extended();
        let xs: Vec<usize> = (0..m.n()).collect();
        let xq: Vec<usize> = (0..m.n() + m.fields()).collect();
        let mut out = MultiVector::zero(s, 1);
        let slots = 1 + self.below(2);
        for _ in 0..slots {
            let k = self.below(m.n() + m.fields());
            let vars = if s.is_spacetime(k) { &xs } else { &xq };
            let c = self.polynomial(s, vars, 2, self.degree);
            out += &MultiVector::monomial(c, &[k]);
        }
        if out.is_zero() {
            MultiVector::partial(s, 0)
        } else {
            out
        }
    }

    pub fn exact_vector_field(&mut self, m: &Multiphase) -> MultiVector {
        let xi = self.projectable_field(m);
        m.canonical_lift(&xi).expect("projectable polynomial fields lift")
    }

    /// Exact `r`-vector field: a wedge of canonical lifts that happens to be
    /// exact, falling back to a wedge of constant translations.
    pub fn exact_field(&mut self, m: &Multiphase, r: usize) -> MultiVector {
        assert!((1..=m.n()).contains(&r));
        if r == 1 {
            return self.exact_vector_field(m);
        }
        for _ in 0..12 {
            let mut w = self.exact_vector_field(m);
            for _ in 1..r {
                // mixing in translations keeps the wedge exact more often
                let next = if self.rng.gen_bool(0.5) {
                    let mu = self.below(m.n() + m.fields());
                    m.canonical_lift(&MultiVector::partial(m.extended(), mu)).unwrap()
                } else {
                    self.exact_vector_field(m)
                };
                w = w.wedge(&next);
            }
            if !w.is_zero() && m.is_exact(&w) {
                return w;
            }
        }
        let s = m.extended();
        let mut dirs: Vec<usize> = (0..m.n()).collect();
        dirs.shuffle(&mut self.rng);
        let c = self.coefficient();
        MultiVector::basis(s, &dirs[..r]).scale(&c)
    }

    /// Horizontal `(n−1)`-form `Σ_μ (p^μ_i K^i + L^μ) d^n x_μ` on the
    /// ordinary space.
    pub fn kanatchikov_form(&mut self, m: &Multiphase) -> Form {
        let o = m.ordinary();
        let (n, nf) = (m.n(), m.fields());
        let xq: Vec<usize> = (0..n + nf).collect();
        let ks: Vec<Scalar> = (0..nf).map(|_| self.polynomial(o, &xq, 2, self.degree)).collect();
        let mut f = Form::zero(o, n - 1);
        for mu in 0..n {
            let mut c = if self.rng.gen_bool(0.7) { self.polynomial(o, &xq, 2, self.degree) } else { Scalar::zero(o) };
            for (i, k) in ks.iter().enumerate() {
                c += &(&Scalar::var(o, o.momentum(mu, i + 1)) * k);
            }
            f += &horizontal_volume(o, Some(mu)).unwrap().scaled(&c);
        }
        f
    }

    /// Horizontal function on the ordinary space, at most linear in each
    /// multimomentum family.
    pub fn horizontal_function(&mut self, m: &Multiphase) -> Form {
        let o = m.ordinary();
        let (n, nf) = (m.n(), m.fields());
        let xq: Vec<usize> = (0..n + nf).collect();
        let mut f = self.polynomial(o, &xq, 2, self.degree);
        if self.rng.gen_bool(0.6) {
            let (mu, i) = (self.below(n), 1 + self.below(nf));
            let c = self.polynomial(o, &xq, 1, self.degree.min(1));
            f += &(&Scalar::var(o, o.momentum(mu, i)) * &c);
        }
        Form::from_scalar(f)
    }

    /// Random `H(x, q, p^μ_i)` of degree at most 2 in the momenta.
    pub fn dw_hamiltonian(&mut self, m: &Multiphase) -> Scalar {
        let o = m.ordinary();
        let (n, nf) = (m.n(), m.fields());
        let xq: Vec<usize> = (0..n + nf).collect();
        let mut h = self.polynomial(o, &xq, 2, self.degree);
        for _ in 0..1 + self.below(2) {
            let a = o.momentum(self.below(n), 1 + self.below(nf));
            let b = o.momentum(self.below(n), 1 + self.below(nf));
            h += &(&Scalar::var(o, a) * &Scalar::var(o, b)).scale(&self.coefficient());
        }
        h
    }

    /// Poisson pair from the families above, with field degree `r`.
    pub fn poisson_pair_of_degree(&mut self, m: &Multiphase, r: usize) -> HamiltonianPair {
        let n = m.n();
        assert!((1..=n).contains(&r));
        loop {
            let candidate = match self.below(3) {
                0 if r == n => {
                    let h = self.dw_hamiltonian(m);
                    m.dw_hamiltonian_form(&h).ok().map(|d| d.pair)
                }
                1 if r == 1 || r == n => {
                    let f = if r == 1 { self.kanatchikov_form(m) } else { self.horizontal_function(m) };
                    m.solve_hamiltonian(&pullback_horizontal(&f).unwrap()).ok()
                }
                _ => {
                    let x = self.exact_field(m, r);
                    m.exact_pair(&x).ok()
                }
            };
            if let Some(p) = candidate {
                if p.r() == r && m.is_poisson(p.form()).is_ok() {
                    return p;
                }
            }
        }
    }

    pub fn poisson_pair(&mut self, m: &Multiphase) -> HamiltonianPair {
        let r = 1 + self.below(m.n());
        self.poisson_pair_of_degree(m, r)
    }

    /// `k` field degrees in `1..=n`; with probability 3/4 their sum is at
    /// most `max_sum`, where the identities under test are non-trivial.
    pub fn degrees(&mut self, n: usize, k: usize, max_sum: usize) -> Vec<usize> {
        let restrict = self.rng.gen_bool(0.75) && max_sum >= k;
        loop {
            let d: Vec<usize> = (0..k).map(|_| 1 + self.below(n)).collect();
            if !restrict || d.iter().sum::<usize>() <= max_sum {
                return d;
            }
        }
    }

    /// Element of the kernel of `X ↦ i(X)ω` in degree `k`, with polynomial
    /// weight; zero if the kernel is trivial.
    pub fn kernel_shift(&mut self, m: &Multiphase, k: usize) -> MultiVector {
        let s = m.extended();
        let basis = m.omega_kernel_basis(k).unwrap_or_default();
        let mut out = MultiVector::zero(s, k);
        if basis.is_empty() {
            return out;
        }
        let all: Vec<usize> = (0..s.dim()).collect();
        for _ in 0..2 {
            let b = basis.choose(&mut self.rng).unwrap();
            let w = self.polynomial(s, &all, 2, self.degree);
            out += &b.scaled(&w);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let m = Multiphase::new(2, 1).unwrap();
        let a: Vec<_> = {
            let mut g = Generator::new(3, "x", 2);
            (0..5).map(|_| g.poisson_pair(&m)).collect()
        };
        let mut g = Generator::new(3, "x", 2);
        for p in &a {
            assert_eq!(&g.poisson_pair(&m), p);
        }
        let mut other = Generator::new(3, "y", 2);
        let b: Vec<_> = (0..5).map(|_| other.poisson_pair(&m)).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn generated_objects_have_the_advertised_properties() {
        let m = Multiphase::new(2, 1).unwrap();
        let mut g = Generator::new(0, "props", 2);
        for _ in 0..10 {
            let x = g.exact_field(&m, 2);
            assert_eq!(x.degree(), 2);
            assert!(m.is_exact(&x));
            let p = g.poisson_pair(&m);
            assert!(m.verify_pair(p.field(), p.form()).unwrap());
            let k = g.kanatchikov_form(&m);
            assert!(k.is_horizontal() && k.degree() == 1);
            let y = g.kernel_shift(&m, 2);
            assert!(y.contract(m.omega()).is_zero());
        }
    }
}
