//! Expansion of continued-fraction expressions: direct evaluation, fixed-point
//! iteration, and the quadratic closed form obtained by clearing denominators.

use std::collections::BTreeMap;

use super::CFExpr;
use crate::error::{Error, Result};
use crate::exact::Ring;
use crate::series::Series;

/// Evaluate an expression with no `x` and no `g` to a ring element.
pub fn eval_scalar<T: Ring>(e: &CFExpr, binds: &BTreeMap<String, T>) -> Result<T> {
    match e {
        CFExpr::Lit(q) => T::from_rational(q).ok_or_else(|| Error::NotInvertible {
            what: format!("literal {q}"),
        }),
        CFExpr::Param(p) => {
            binds.get(p).cloned().ok_or_else(|| Error::MissingBinding(p.clone()))
        }
        CFExpr::X => Err(Error::Invalid("`x` is not allowed in a scalar expression".into())),
        CFExpr::SelfRef => Err(Error::UnexpectedSelfRef),
        CFExpr::Neg(a) => Ok(-eval_scalar(a, binds)?),
        CFExpr::Add(a, b) => Ok(eval_scalar(a, binds)? + eval_scalar(b, binds)?),
        CFExpr::Sub(a, b) => Ok(eval_scalar(a, binds)? - eval_scalar(b, binds)?),
        CFExpr::Mul(a, b) => Ok(eval_scalar(a, binds)? * eval_scalar(b, binds)?),
        CFExpr::Div(a, b) => {
            let num = eval_scalar(a, binds)?;
            let den = eval_scalar(b, binds)?;
            match den.inv() {
                Some(inv) => Ok(num * inv),
                None => Err(Error::DivisionByZero),
            }
        }
        CFExpr::Pow(a, e) => Ok(crate::exact::ring_pow(&eval_scalar(a, binds)?, *e as usize)),
    }
}

/// Evaluate an expression to a series at the given order. `SelfRef` resolves
/// to `g_value` when provided, and is an error otherwise.
pub fn eval_series<T: Ring>(
    e: &CFExpr,
    binds: &BTreeMap<String, T>,
    g_value: Option<&Series<T>>,
    order: usize,
) -> Result<Series<T>> {
    let ev = |e: &CFExpr| eval_series(e, binds, g_value, order);
    match e {
        CFExpr::Lit(q) => {
            let c = T::from_rational(q).ok_or_else(|| Error::NotInvertible {
                what: format!("literal {q}"),
            })?;
            Ok(Series::constant(c, order))
        }
        CFExpr::Param(p) => {
            let c = binds.get(p).cloned().ok_or_else(|| Error::MissingBinding(p.clone()))?;
            Ok(Series::constant(c, order))
        }
        CFExpr::X => Ok(Series::monomial(T::one(), 1, order)),
        CFExpr::SelfRef => match g_value {
            Some(g) => Ok(g.truncate(g.order().min(order))),
            None => Err(Error::UnexpectedSelfRef),
        },
        CFExpr::Neg(a) => Ok(ev(a)?.neg()),
        CFExpr::Add(a, b) => Ok(ev(a)?.add(&ev(b)?)),
        CFExpr::Sub(a, b) => Ok(ev(a)?.sub(&ev(b)?)),
        CFExpr::Mul(a, b) => Ok(ev(a)?.mul(&ev(b)?)),
        CFExpr::Div(a, b) => ev(a)?.div(&ev(b)?),
        CFExpr::Pow(a, e) => Ok(ev(a)?.pow(*e as usize)),
    }
}

/// Solve `g = E(x, g)` by fixed-point iteration from `g = 1`.
///
/// Stops when two successive iterates agree on all coefficients `0..=order`;
/// fails as non-contractive if that does not happen within `order + 2`
/// iterations.
pub fn expand_fixpoint<T: Ring>(
    e: &CFExpr,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<Series<T>> {
    let mut g = Series::one(order);
    for _ in 0..order + 2 {
        let next = eval_series(e, binds, Some(&g), order)?;
        if next == g {
            return Ok(g);
        }
        g = next;
    }
    Err(Error::NonContractive)
}

/// Polynomial in `g` with series coefficients, plus fraction arithmetic on
/// such polynomials. Degrees stay tiny (= 2 for every equation in scope).
struct GPoly<T>(Vec<Series<T>>);

impl<T: Ring> GPoly<T> {
    fn constant(s: Series<T>) -> Self {
        GPoly(vec![s])
    }

    fn selfref(order: usize) -> Self {
        GPoly(vec![Series::zero(order), Series::one(order)])
    }

    fn add(&self, rhs: &Self) -> Self {
        let n = self.0.len().max(rhs.0.len());
        let order = self.any_order().min(rhs.any_order());
        let zero = Series::zero(order);
        GPoly(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).unwrap_or(&zero);
                    let b = rhs.0.get(i).unwrap_or(&zero);
                    a.truncate(order).add(&b.truncate(order.min(b.order())))
                })
                .collect(),
        )
    }

    fn neg(&self) -> Self {
        GPoly(self.0.iter().map(Series::neg).collect())
    }

    fn mul(&self, rhs: &Self) -> Self {
        let order = self.any_order().min(rhs.any_order());
        let mut out = vec![Series::zero(order); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        GPoly(out)
    }

    fn any_order(&self) -> usize {
        self.0[0].order()
    }

    fn mul_by_g(&self) -> Self {
        let mut v = vec![Series::zero(self.any_order())];
        v.extend(self.0.iter().cloned());
        GPoly(v)
    }

    /// Degree in `g` after dropping zero leading coefficients.
    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && self.0.last().is_some_and(Series::is_zero) {
            self.0.pop();
        }
        self
    }
}

/// Numerator/denominator pair of `GPoly`s.
struct GFrac<T> {
    num: GPoly<T>,
    den: GPoly<T>,
}

fn eval_gfrac<T: Ring>(
    e: &CFExpr,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<GFrac<T>> {
    let one = || GPoly::constant(Series::one(order));
    let ev = |e: &CFExpr| eval_gfrac(e, binds, order);
    match e {
        CFExpr::SelfRef => Ok(GFrac { num: GPoly::selfref(order), den: one() }),
        CFExpr::Lit(_) | CFExpr::Param(_) | CFExpr::X => Ok(GFrac {
            num: GPoly::constant(eval_series(e, binds, None, order)?),
            den: one(),
        }),
        CFExpr::Neg(a) => {
            let a = ev(a)?;
            Ok(GFrac { num: a.num.neg(), den: a.den })
        }
        CFExpr::Add(a, b) => {
            let (a, b) = (ev(a)?, ev(b)?);
            Ok(GFrac {
                num: a.num.mul(&b.den).add(&b.num.mul(&a.den)),
                den: a.den.mul(&b.den),
            })
        }
        CFExpr::Sub(a, b) => {
            let (a, b) = (ev(a)?, ev(b)?);
            Ok(GFrac {
                num: a.num.mul(&b.den).add(&b.num.mul(&a.den).neg()),
                den: a.den.mul(&b.den),
            })
        }
        CFExpr::Mul(a, b) => {
            let (a, b) = (ev(a)?, ev(b)?);
            Ok(GFrac { num: a.num.mul(&b.num), den: a.den.mul(&b.den) })
        }
        CFExpr::Div(a, b) => {
            let (a, b) = (ev(a)?, ev(b)?);
            Ok(GFrac { num: a.num.mul(&b.den), den: a.den.mul(&b.num) })
        }
        CFExpr::Pow(a, e) => {
            let a = ev(a)?;
            let mut num = one();
            let mut den = one();
            for _ in 0..*e {
                num = num.mul(&a.num);
                den = den.mul(&a.den);
            }
            Ok(GFrac { num, den })
        }
    }
}

/// Solve `g = E(x, g)` through its quadratic closed form.
///
/// Clearing denominators must give `B g^2 - A g + C = 0` with `B` of positive
/// valuation; the branch `g = (A - sqrt(A^2 - 4BC)) / (2B)`, the one with a
/// finite value at 0, is always taken.
pub fn expand_quadratic<T: Ring>(
    e: &CFExpr,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<Series<T>> {
    // first pass just to discover the valuation of B
    let coeffs = quadratic_coeffs(e, binds, order)?;
    let v = coeffs[2].valuation().ok_or(Error::BadQuadratic(
        "coefficient of g^2 vanishes through the truncation order",
    ))?;
    // recompute with enough slack for the final division by B
    let work = order + v;
    let [p0, p1, p2] = quadratic_coeffs(e, binds, work)?;

    // normalize so that A(0) = 1, where the equation reads B g^2 - A g + C = 0
    let a0 = p1.coeff(0).neg_ref();
    let unit = a0.inv().ok_or(Error::DiscriminantNotOne)?;
    let b = p2.scale(&unit);
    let a = p1.scale(&unit).neg();
    let c = p0.scale(&unit);

    if b.valuation().is_none_or(|bv| bv == 0) {
        return Err(Error::BadQuadratic("coefficient of g^2 must have positive valuation"));
    }
    let disc = a.mul(&a).sub(&b.mul(&c).scale(&crate::exact::int_in(4.into())));
    if !disc.coeff(0).is_one() {
        return Err(Error::DiscriminantNotOne);
    }
    let root = disc.sqrt()?;
    let two = T::one() + T::one();
    a.sub(&root).div(&b.scale(&two))
}

fn quadratic_coeffs<T: Ring>(
    e: &CFExpr,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<[Series<T>; 3]> {
    let f = eval_gfrac(e, binds, order)?;
    // g = num/den  =>  g*den - num = 0
    let p = f.den.mul_by_g().add(&f.num.neg()).trimmed();
    let degree = p.0.len() - 1;
    if degree != 2 {
        return Err(Error::NotQuadratic { degree });
    }
    let mut it = p.0.into_iter();
    let p0 = it.next().expect("degree 2");
    let p1 = it.next().expect("degree 2");
    let p2 = it.next().expect("degree 2");
    Ok([p0, p1, p2])
}
