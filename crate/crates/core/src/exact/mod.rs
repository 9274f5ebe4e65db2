//! Exact arithmetic foundation: the coefficient-ring abstraction, sparse
//! multivariate polynomials, dense matrices and an exact linear solver.
//!
//! Every computation in this crate is exact. The scalar types are
//! arbitrary-precision integers ([`Int`]), arbitrary-precision rationals
//! ([`Rational`]) and sparse polynomials over the rationals ([`Poly`]).
//! Code that is agnostic to the coefficient ring is written against the
//! [`Ring`] trait.

mod matrix;
mod poly;
mod ringelem;
mod solve;

pub use matrix::Matrix;
pub use poly::{poly_degree_cap, set_poly_degree_cap, Poly};
pub use ringelem::{Homogeneous, RingElem};
pub use solve::{exact_solve, AffineSolutionSet, SolveStatus};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer scalar.
pub type Int = BigInt;
/// Arbitrary-precision rational scalar, always reduced, denominator > 0.
pub type Rational = BigRational;

/// A commutative ring with exact arithmetic, as used for series coefficients,
/// matrix entries and Hankel determinants.
///
/// The ring must be an integral domain: `exact_div` relies on cancellation.
pub trait Ring:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Multiplicative inverse, if this element is a unit of the ring.
    fn inv(&self) -> Option<Self>;

    /// Exact division: `Some(q)` with `self == q * rhs` if such `q` exists.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;

    /// Embed a rational constant into the ring, if it has one.
    fn from_rational(q: &Rational) -> Option<Self>;

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn neg_ref(&self) -> Self {
        -self.clone()
    }
}

impl Ring for BigInt {
    fn inv(&self) -> Option<Self> {
        if self.is_one() || (-self).is_one() {
            Some(self.clone())
        } else {
            None
        }
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(self, rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        if q.denom().is_one() {
            Some(q.numer().clone())
        } else {
            None
        }
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Ring for BigRational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self / rhs)
        }
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(q.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }
}

/// `base^exp` by repeated squaring.
pub fn ring_pow<T: Ring>(base: &T, exp: usize) -> T {
    let mut result = T::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul_ref(&sq);
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul_ref(&sq);
        }
    }
    result
}

/// Binomial coefficient with the convention `binom(n, k) = 0` for `k > n`.
pub fn binomial(n: usize, k: usize) -> Int {
    if k > n {
        return Int::zero();
    }
    num_integer::binomial(Int::from(n), Int::from(k))
}

/// Binomial coefficient embedded into an arbitrary ring.
pub fn binomial_in<T: Ring>(n: usize, k: usize) -> T {
    int_in(binomial(n, k))
}

/// Embed an integer into an arbitrary ring.
pub fn int_in<T: Ring>(n: Int) -> T {
    T::from_rational(&Rational::from_integer(n)).expect("integers embed into every ring")
}

/// Parse the rational text form: optional sign, integer, optional `/` and a
/// positive integer denominator (`"-101/3"`, `"4299"`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.parse::<BigInt>().map_err(|_| Error::Invalid(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            if den.is_negative() {
                return Err(Error::Invalid(format!(
                    "invalid rational `{s}`: denominator must be positive"
                )));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// `q^exp` for rationals (0^0 = 1).
pub fn rat_pow(q: &Rational, exp: usize) -> Rational {
    ring_pow(q, exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn rational_arithmetic_examples() {
        assert_eq!(rat(1, 2) + rat(1, 3), rat(5, 6));
        assert_eq!(rat(-101, 3) * rat(3, 1), rat(-101, 1));
        assert_eq!(rat(23359, 3) / rat(23359, 3), rat(1, 1));
    }

    #[test]
    fn rational_division_by_zero() {
        assert_eq!(rat(1, 2).exact_div(&Rational::zero()), None);
        assert_eq!(Rational::zero().inv(), None);
    }

    #[test]
    fn rational_text_form() {
        assert_eq!(parse_rational("-101/3").unwrap(), rat(-101, 3));
        assert_eq!(parse_rational("4299").unwrap(), rat(4299, 1));
        assert_eq!(parse_rational("+7").unwrap(), rat(7, 1));
        assert_eq!(rat(-101, 3).to_string(), "-101/3");
        assert_eq!(rat(5, 1).to_string(), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn integer_exact_division() {
        let six = Int::from(6);
        let three = Int::from(3);
        let four = Int::from(4);
        assert_eq!(six.exact_div(&three), Some(Int::from(2)));
        assert_eq!(six.exact_div(&four), None);
        assert_eq!(six.exact_div(&Int::zero()), None);
    }

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), Int::from(10));
        assert_eq!(binomial(2, 5), Int::zero());
        assert_eq!(binomial(0, 0), Int::one());
    }

    proptest! {
        #[test]
        fn rational_add_mul_round_trip(an in -1000i64..1000, ad in 1i64..60,
                                       bn in -1000i64..1000, bd in 1i64..60) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            prop_assert_eq!((a.clone() + b.clone()) - b.clone(), a.clone());
            if !b.is_zero() {
                prop_assert_eq!((a.clone() * b.clone()) / b.clone(), a);
            }
        }

        #[test]
        fn ring_pow_matches_naive(n in -9i64..9, d in 1i64..5, e in 0usize..8) {
            let q = rat(n, d);
            let mut naive = Rational::one();
            for _ in 0..e { naive *= q.clone(); }
            prop_assert_eq!(ring_pow(&q, e), naive);
        }
    }
}
