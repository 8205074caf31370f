use alloc::string::String;
use core::fmt;

use crate::multiphase::Flavor;
use crate::scalar::Coordinate;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operands live on different coordinate sets.
    SpaceMismatch,
    InvalidDimensions {
        n: usize,
        fields: usize,
    },
    UnknownCoordinate(Coordinate),
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    MissingAssignment(Coordinate),
    WrongFlavor {
        expected: Flavor,
        found: Flavor,
    },
    MixedVariance,
    DegreeOutOfRange {
        degree: usize,
        max: usize,
    },
    DegreeMismatch {
        form: usize,
        field: usize,
        expected: usize,
    },
    NotHorizontal,
    /// `df` is not in the image of `X ↦ i(X)ω`.
    NotHamiltonian(String),
    /// A kernel element of `ω` does not annihilate the form.
    NotPoisson(String),
    NotExact,
    Precondition(String),
    NotCommuting,
    InvalidPair,
    NotProjectable,
    LiftFailed(String),
    DegenerateLegendre(String),
    Unsupported(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SpaceMismatch => write!(f, "operands belong to different coordinate sets"),
            Error::InvalidDimensions { n, fields } => {
                write!(f, "invalid dimensions n={n}, N={fields} (both must be at least 1)")
            }
            Error::UnknownCoordinate(c) => write!(f, "coordinate {c:?} is not part of this space"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range (length {len})")
            }
            Error::MissingAssignment(c) => write!(f, "no value assigned to coordinate {c:?}"),
            Error::WrongFlavor { expected, found } => {
                write!(f, "expected a {expected:?} phase space, found {found:?}")
            }
            Error::MixedVariance => write!(f, "cannot mix forms and multi-vector fields"),
            Error::DegreeOutOfRange { degree, max } => {
                write!(f, "degree {degree} out of range (maximum {max})")
            }
            Error::DegreeMismatch { form, field, expected } => {
                write!(f, "form degree {form} and field degree {field} do not add up to {expected}")
            }
            Error::NotHorizontal => write!(f, "form is not horizontal"),
            Error::NotHamiltonian(why) => write!(f, "NotHamiltonian: {why}"),
            Error::NotPoisson(why) => write!(f, "NotPoisson: {why}"),
            Error::NotExact => write!(f, "multi-vector field is not exact (L_X θ ≠ 0)"),
            Error::NotCommuting => write!(f, "vector fields do not commute"),
            Error::Precondition(why) => write!(f, "precondition failed: {why}"),
            Error::InvalidPair => write!(f, "pair does not satisfy i(X)ω = df"),
            Error::NotProjectable => write!(f, "vector field is not projectable"),
            Error::LiftFailed(why) => write!(f, "canonical lift failed: {why}"),
            Error::DegenerateLegendre(why) => write!(f, "Legendre map not invertible: {why}"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for Error {}
