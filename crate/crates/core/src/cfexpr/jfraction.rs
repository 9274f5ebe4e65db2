//! Classical Jacobi continued fractions and their Hankel product formula.

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{rat_pow, Rational};
use crate::series::Series;

/// A finite J-fraction
/// `1/(1 - a_0 x - b_0 x^2/(1 - a_1 x - b_1 x^2/(...)))`,
/// with levels `a_0..a_m` and `b_0..b_{m-1}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JFraction {
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl JFraction {
    pub fn new(a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() + 1 {
            return Err(Error::Invalid(format!(
                "a J-fraction needs one more a-level than b-levels, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(JFraction { a, b })
    }

    pub fn a_levels(&self) -> &[Rational] {
        &self.a
    }

    pub fn b_levels(&self) -> &[Rational] {
        &self.b
    }

    /// Hankel transform by the product formula `h_n = prod_{k<n} b_k^{n-k}`,
    /// so `h_0 = 1`, `h_1 = b_0`, `h_2 = b_0^2 b_1`. The determinant of the
    /// expansion's Hankel matrix agrees; the `a` levels never enter.
    pub fn hankel(&self, m: usize) -> Result<Vec<Rational>> {
        if m > self.b.len() {
            return Err(Error::InsufficientLevels { needed: m, got: self.b.len() });
        }
        Ok((0..=m)
            .map(|n| {
                let mut h = Rational::one();
                for (k, b) in self.b.iter().enumerate().take(n) {
                    h *= rat_pow(b, n - k);
                }
                h
            })
            .collect())
    }

    /// Series expansion, computed bottom-up with the terminal level
    /// `1/(1 - a_m x)`.
    pub fn expansion(&self, order: usize) -> Series<Rational> {
        let one = Series::one(order);
        let x = Series::monomial(Rational::one(), 1, order);
        let x2 = Series::monomial(Rational::one(), 2, order);
        let mut tail = one
            .div(&one.sub(&x.scale(self.a.last().expect("nonempty"))))
            .expect("unit constant term");
        for k in (0..self.b.len()).rev() {
            let den = one.sub(&x.scale(&self.a[k])).sub(&x2.scale(&self.b[k]).mul(&tail));
            tail = one.div(&den).expect("unit constant term");
        }
        tail
    }
}
