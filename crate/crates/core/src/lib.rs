//! Exact exterior calculus on the multiphase spaces of first-order classical
//! field theory.
//!
//! The crate is `no_std` (it needs `alloc`). Every coefficient is a polynomial
//! with arbitrary-precision rational coefficients, so all identities are
//! checked by structural equality with zero tolerance.
//!
//! Layout:
//!
//! * [`scalar`]: sparse multivariate polynomials over the phase-space
//!   coordinates.
//! * [`exterior`] and [`schouten`]: differential forms, multi-vector fields,
//!   `d`, interior products, Lie derivatives and the Schouten bracket.
//! * [`multiphase`]: the extended and ordinary multiphase spaces with their
//!   canonical forms, the Euler field, `d^V`, pullback and the Hodge star.
//! * [`hamiltonian`]: solving `i(X)ω = df`, exactness, `J`, Poisson forms and
//!   the standard example families.
//! * [`brackets`]: the naive contraction bracket, its anomalies, the
//!   corrected bracket in both forms, Kanatchikov's bracket and the bullet
//!   product.
//! * [`field_theory`]: Lagrangian to De Donder–Weyl pipeline.
//!
//! Sign conventions are collected in [`conventions`].

#![no_std]

extern crate alloc;

pub mod brackets;
pub mod conventions;
pub mod error;
pub mod exterior;
pub mod field_theory;
pub mod hamiltonian;
pub mod linalg;
pub mod multiphase;
pub mod scalar;
pub mod schouten;

pub use error::Error;
pub use exterior::{Blade, Form, GradedObject, MultiVector};
pub use multiphase::{Flavor, Metric, Multiphase, PhaseSpace};
pub use scalar::{Coordinate, Rational, Scalar};

pub type Result<T, E = Error> = core::result::Result<T, E>;
