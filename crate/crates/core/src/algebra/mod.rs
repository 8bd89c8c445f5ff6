//! Exact rational algebra: polynomials, symmetric multilinear maps, the
//! polarization isomorphism between them, and the independence tests used to
//! separate coefficients in polynomial identities.

pub mod combinatorics;
pub mod independence;
pub mod linalg;
pub mod poly;
pub mod symmetric;

use num_bigint::BigInt;
use serde::Serializer;
use thiserror::Error;

pub use independence::{
    algebraically_independent, monomial_family_independent, IndependenceCertificate, IndependenceReport,
    LinearFormFamily,
};
pub use poly::{Monomial, MultiPoly};
pub use symmetric::{depolarize, polarize, sym_power, sym_product, SymMultilinear};

/// Arbitrary precision rational, always in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("expected {expected} arguments, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("polynomial is not homogeneous of the requested degree")]
    NonHomogeneous,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("{count} monomials exceed the configured cap of {cap}")]
    BudgetTooLarge { count: usize, cap: usize },
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub(crate) fn serde_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub(crate) fn serde_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}
