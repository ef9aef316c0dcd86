//! Exact arithmetic: rationals, Gaussian rationals, univariate polynomials
//! and 2×2 integer lattice algebra.

mod gaussian;
mod lattice;
mod polynomial;
mod rational;

pub use gaussian::GaussianRational;
pub use lattice::{bezout, Bezout, LatticeVector2, Unimodular2};
pub use polynomial::Polynomial;
pub use rational::Rational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division leaves nonzero remainder {remainder}")]
    NonzeroRemainder { remainder: Polynomial },
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("matrix determinant {det} is not ±1")]
    NotUnimodular { det: i128 },
    #[error("integer overflow")]
    Overflow,
    #[error("parse error: {0}")]
    Parse(String),
}
