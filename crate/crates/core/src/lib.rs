//! Exact-arithmetic toolkit for integer sequences whose Hankel transforms
//! satisfy Somos recurrences.
//!
//! The pipeline: generalized Jacobi continued fractions (parsed from a small
//! expression DSL) expand into integer sequences, equivalently obtained by
//! applying stretched Riordan arrays to the Catalan numbers; the sequence
//! Hankel transform is computed with fraction-free determinants; and Somos
//! 4/6/8 relations are verified or fitted exactly over the rationals.
//!
//! Core math is generic over the coefficient ring through [`exact::Ring`],
//! with arbitrary-precision integers, rationals and sparse polynomials as the
//! concrete scalars — never floating point. Type aliases for the common
//! instantiations live at the crate root.

pub mod cfexpr;
pub mod conjectures;
pub mod error;
pub mod exact;
pub mod hankel;
pub mod riordan;
pub mod series;
pub mod somos;

pub use error::{Error, Result};
pub use exact::{Int, Poly, Rational, RingElem};

/// Series over the rationals, the workhorse instantiation.
pub type QSeries = series::Series<Rational>;
/// Series over the polynomial ring, for symbolic parameter sweeps.
pub type PolySeries = series::Series<Poly>;
/// Series over the integers.
pub type IntSeries = series::Series<Int>;
/// Dense rational matrix.
pub type QMatrix = exact::Matrix<Rational>;
