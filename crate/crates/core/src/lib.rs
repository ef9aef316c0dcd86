//! Exact operator calculus on Fourier modes of the circle: commutants of the
//! Szegő projectors, their leading symbols on the symplectic cut, and the
//! lattice-cone arithmetic of toric cuts.
//!
//! Everything outside [`linalg`] and the spectral experiments in
//! [`operator`] is exact rational arithmetic.

pub mod algebra;
pub mod cones;
pub mod cut;
pub mod linalg;
pub mod operator;
pub mod report;
pub mod sample;
pub mod symbol;

pub use algebra::{AlgebraError, GaussianRational, LatticeVector2, Polynomial, Rational, Unimodular2};
pub use operator::{CanonicalOperator, Generator, OperatorError, Parity};
pub use report::ExperimentReport;
pub use symbol::{LaurentSymbol, SymbolVariant};
