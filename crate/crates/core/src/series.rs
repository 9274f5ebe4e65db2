//! Truncated formal power series over an exact coefficient ring.
//!
//! A `Series<T>` stores coefficients of `x^0 .. x^N`; `N` is the truncation
//! order. Coefficients beyond the order are *unknown*, not zero, so binary
//! operations truncate to the smaller order and never read past what is
//! stored. The default order used by convenience constructors is
//! [`DEFAULT_ORDER`]; every generation routine still takes an explicit order.

use crate::error::{Error, Result};
use crate::exact::Ring;

/// Default truncation order for desk-scale work.
pub const DEFAULT_ORDER: usize = 32;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Series<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Series<T> {
    /// Build from coefficients `x^0..x^N`. Panics on an empty list: a series
    /// with no known coefficients has no meaning here.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant coefficient");
        Series { coeffs }
    }

    pub fn constant(c: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = c;
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![T::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Series::constant(T::one(), order)
    }

    /// `c * x^k`, truncated at `order`.
    pub fn monomial(c: T, k: usize, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        if k <= order {
            coeffs[k] = c;
        }
        Series { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Index of the lowest nonzero coefficient, if any is stored.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    /// Drop coefficients above `order` (which must not exceed the stored one).
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        Series { coeffs: self.coeffs[..=order].to_vec() }
    }

    fn min_order(&self, rhs: &Self) -> usize {
        self.order().min(rhs.order())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.min_order(rhs);
        Series {
            coeffs: (0..=n).map(|i| self.coeffs[i].add_ref(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.min_order(rhs);
        Series {
            coeffs: (0..=n).map(|i| self.coeffs[i].sub_ref(&rhs.coeffs[i])).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Series { coeffs: self.coeffs.iter().map(Ring::neg_ref).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.min_order(rhs);
        let mut coeffs = vec![T::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add_ref(&a.mul_ref(b));
                }
            }
        }
        Series { coeffs }
    }

    /// Multiply every coefficient by a scalar.
    pub fn scale(&self, c: &T) -> Self {
        Series { coeffs: self.coeffs.iter().map(|a| a.mul_ref(c)).collect() }
    }

    /// Substitute `x -> c*x`.
    pub fn scale_arg(&self, c: &T) -> Self {
        let mut pow = T::one();
        Series {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if i > 0 {
                        pow = pow.mul_ref(c);
                    }
                    a.mul_ref(&pow)
                })
                .collect(),
        }
    }

    /// Multiply by `x^k`, keeping the truncation order.
    #[allow(clippy::manual_memcpy)] // clone per element, not a memcpy
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![T::zero(); n + 1];
        if k <= n {
            for i in 0..=(n - k) {
                coeffs[i + k] = self.coeffs[i].clone();
            }
        }
        Series { coeffs }
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut result = Series::one(self.order());
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        result
    }

    /// Exact series division.
    ///
    /// The divisor's lowest nonzero coefficient must be a unit; the dividend
    /// must vanish below the divisor's valuation. The result order is the
    /// common order minus that valuation.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let v = rhs.valuation().ok_or(Error::DivisionByZero)?;
        let unit = rhs.coeffs[v].inv().ok_or(Error::NonUnitLeading)?;
        if self.coeffs.iter().take(v).any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible);
        }
        let n = self.min_order(rhs);
        if n < v {
            return Err(Error::InsufficientOrder { needed: v, got: n });
        }
        let n = n - v;
        let mut q = vec![T::zero(); n + 1];
        for i in 0..=n {
            let mut acc = self.coeffs[i + v].clone();
            for (j, qj) in q.iter().enumerate().take(i) {
                acc = acc.sub_ref(&qj.mul_ref(&rhs.coeffs[i - j + v]));
            }
            q[i] = acc.mul_ref(&unit);
        }
        Ok(Series { coeffs: q })
    }

    /// Square root by Newton iteration seeded at 1; needs constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::SqrtConstantTerm);
        }
        let two = T::one() + T::one();
        let half = two.inv().ok_or_else(|| Error::NotInvertible { what: "2".to_string() })?;
        let n = self.order();
        let mut y = Series::one(n);
        let iters = usize::BITS - n.leading_zeros(); // ceil(log2(n+1))
        for _ in 0..iters {
            y = y.add(&self.div(&y)?).scale(&half);
        }
        debug_assert_eq!(y.mul(&y), self.clone(), "Newton sqrt failed to converge");
        Ok(y)
    }

    /// Composition `self(inner)`, requiring `inner` to have zero constant
    /// term. The result has `inner`'s order; `self` must carry enough
    /// coefficients to make every kept coefficient exact.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let n = inner.order();
        let v = match inner.valuation() {
            None => return Ok(Series::constant(self.coeffs[0].clone(), n)),
            Some(0) => return Err(Error::ComposeConstantTerm),
            Some(v) => v,
        };
        let kmax = n / v;
        if self.order() < kmax {
            return Err(Error::InsufficientOrder { needed: kmax, got: self.order() });
        }
        // Horner evaluation in the inner series
        let mut acc = Series::constant(self.coeffs[kmax].clone(), n);
        for k in (0..kmax).rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] = acc.coeffs[0].add_ref(&self.coeffs[k]);
        }
        Ok(acc)
    }
}

/// Generating function of the Catalan numbers, truncated: `C_0 .. C_order`.
pub fn catalan_gf<T: Ring>(order: usize) -> Series<T> {
    let mut c = vec![T::zero(); order + 1];
    c[0] = T::one();
    for n in 0..order {
        let mut acc = T::zero();
        for i in 0..=n {
            acc = acc.add_ref(&c[i].mul_ref(&c[n - i]));
        }
        c[n + 1] = acc;
    }
    Series::new(c)
}
