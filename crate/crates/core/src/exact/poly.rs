//! Sparse multivariate polynomials over the rationals, in graded-lex order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_traits::{One, Signed, Zero};

use super::{Rational, Ring};
use crate::error::{Error, Result};

static DEGREE_CAP: AtomicU32 = AtomicU32::new(64);

/// Total-degree cap applied to polynomial products. Exceeding it panics: a
/// runaway symbolic computation is a bug in the caller, not data.
pub fn poly_degree_cap() -> u32 {
    DEGREE_CAP.load(AtomicOrdering::Relaxed)
}

/// Raise or lower the product degree cap (default 64).
pub fn set_poly_degree_cap(cap: u32) {
    DEGREE_CAP.store(cap, AtomicOrdering::Relaxed);
}

/// Exponent vector with graded-lexicographic ordering.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
struct Monomial(Vec<u32>);

impl Monomial {
    fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse multivariate polynomial with rational coefficients.
///
/// Variables are stored as a sorted list of names; terms map exponent vectors
/// (of length `vars.len()`) to nonzero coefficients in graded-lex order, which
/// makes equality and printing canonical. Operations on polynomials with
/// different variable lists first lift both operands to the merged list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    /// The constant polynomial `c` (no variables).
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        Poly { vars: Vec::new(), terms }
    }

    /// The single variable `name`.
    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        Poly { vars: vec![name.to_string()], terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Poly::constant(Rational::from_integer(n.into()))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::total_degree)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.total_degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Evaluate with every variable bound to a rational.
    pub fn eval(&self, bindings: &BTreeMap<String, Rational>) -> Result<Rational> {
        for v in &self.vars {
            if !bindings.contains_key(v) {
                return Err(Error::MissingBinding(v.clone()));
            }
        }
        let mut acc = Rational::zero();
        for (mono, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (v, &e) in self.vars.iter().zip(&mono.0) {
                if e > 0 {
                    term *= super::rat_pow(&bindings[v], e as usize);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Coefficients by powers of `var`, lowest first. Fails if any other
    /// variable appears.
    pub fn univariate_coeffs(&self, var: &str) -> Result<Vec<Rational>> {
        let idx = self.vars.iter().position(|v| v == var);
        for (i, v) in self.vars.iter().enumerate() {
            if Some(i) != idx && self.terms.keys().any(|m| m.0[i] > 0) {
                return Err(Error::Invalid(format!(
                    "polynomial is not univariate in `{var}`: contains `{v}`"
                )));
            }
        }
        let deg = match idx {
            None => {
                // constant (possibly with var absent from the list)
                return Ok(vec![self.constant_term()]);
            }
            Some(i) => self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0) as usize,
        };
        let i = idx.unwrap();
        let mut out = vec![Rational::zero(); deg + 1];
        for (mono, coeff) in &self.terms {
            out[mono.0[i] as usize] = coeff.clone();
        }
        Ok(out)
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.vars.clear();
            return self;
        }
        // canonical form also drops variables no term uses
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return self;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let exps =
                    m.0.iter().zip(&used).filter(|(_, &u)| u).map(|(&e, _)| e).collect();
                (Monomial(exps), c)
            })
            .collect();
        Poly { vars, terms }
    }

    /// Lift both polynomials onto the merged (sorted) variable list.
    fn unify(a: &Poly, b: &Poly) -> (Poly, Poly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let mut vars: Vec<String> = a.vars.iter().chain(b.vars.iter()).cloned().collect();
        vars.sort();
        vars.dedup();
        (a.relabel(&vars), b.relabel(&vars))
    }

    fn relabel(&self, vars: &[String]) -> Poly {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(mono, c)| {
                let mut exps = vec![0u32; vars.len()];
                for (i, &e) in mono.0.iter().enumerate() {
                    exps[map[i]] = e;
                }
                (Monomial(exps), c.clone())
            })
            .collect();
        Poly { vars: vars.to_vec(), terms }
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly> {
        let cap = poly_degree_cap();
        if let (Some(da), Some(db)) = (self.total_degree(), rhs.total_degree()) {
            if da + db > cap {
                return Err(Error::Invalid(format!(
                    "product total degree {} exceeds the degree cap {cap}",
                    da + db
                )));
            }
        }
        let (a, b) = Poly::unify(self, rhs);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let exps: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                let c = ca * cb;
                let entry = terms.entry(Monomial(exps)).or_insert_with(Rational::zero);
                *entry += c;
            }
        }
        Ok(Poly { vars: a.vars, terms }.normalized())
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let (mut a, b) = Poly::unify(&self, &rhs);
        for (mono, c) in b.terms {
            let entry = a.terms.entry(mono).or_insert_with(Rational::zero);
            *entry += c;
        }
        a.normalized()
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        match self.checked_mul(&rhs) {
            Ok(p) => p,
            Err(e) => panic!("{e} (raise it with set_poly_degree_cap)"),
        }
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly { vars: Vec::new(), terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
    fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }
}

impl Ring for Poly {
    fn inv(&self) -> Option<Self> {
        if self.is_constant() && !self.is_zero() {
            Some(Poly::constant(self.constant_term().recip()))
        } else {
            None
        }
    }

    /// Exact multivariate division by repeated leading-term cancellation.
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while !rem.is_zero() {
            // re-unify each step: normalization may have dropped variables
            let (r2, d2) = Poly::unify(&rem, rhs);
            let nvars = r2.vars.len();
            let (lm_r, lc_r) = {
                let (m, c) = r2.leading().expect("nonzero");
                (m.clone(), c.clone())
            };
            let (lm_d, lc_d) = {
                let (m, c) = d2.leading().expect("nonzero");
                (m.clone(), c.clone())
            };
            let mut exps = vec![0u32; nvars];
            #[allow(clippy::needless_range_loop)]
            for i in 0..nvars {
                if lm_r.0[i] < lm_d.0[i] {
                    return None;
                }
                exps[i] = lm_r.0[i] - lm_d.0[i];
            }
            let t = Poly {
                vars: r2.vars.clone(),
                terms: BTreeMap::from([(Monomial(exps), &lc_r / &lc_d)]),
            }
            .normalized();
            rem = rem - t.checked_mul(rhs).ok()?;
            quot = quot + t;
        }
        Some(quot)
    }

    fn from_rational(q: &Rational) -> Option<Self> {
        Some(Poly::constant(q.clone()))
    }
}

impl fmt::Display for Poly {
    /// Sum of monomials, ascending graded-lex, re-parseable by the expression
    /// grammar: `-1 - 4*r - r^2 + 2*r^3 - r^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (mono, coeff)) in self.terms.iter().enumerate() {
            let neg = coeff.is_negative();
            let mag = coeff.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || mono.total_degree() == 0 {
                factors.push(mag.to_string());
            }
            for (v, &e) in self.vars.iter().zip(&mono.0) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rv(name: &str) -> Poly {
        Poly::var(name)
    }

    #[test]
    fn construction_and_display() {
        let p = rv("r") * rv("r") - Poly::from_integer(2) * rv("r") + Poly::from_integer(1);
        assert_eq!(p.to_string(), "1 - 2*r + r^2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::constant(Rational::new((-5).into(), 3.into())).to_string(), "-5/3");
        let q = rv("r") * rv("s") * Poly::from_integer(3);
        assert_eq!(q.to_string(), "3*r*s");
    }

    #[test]
    fn variable_lists_merge() {
        let p = rv("s") + rv("r");
        assert_eq!(p.vars(), &["r".to_string(), "s".to_string()]);
        let q = (rv("r") + Poly::from_integer(1)) * (rv("t") - rv("s"));
        assert!(q.vars().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn eval_conjecture4_alpha() {
        // (s+v)^2 * w^2 at s=1, v=1, w=1
        let p = (rv("s") + rv("v")) * (rv("s") + rv("v")) * rv("w") * rv("w");
        let binds = BTreeMap::from([
            ("s".to_string(), r(1)),
            ("v".to_string(), r(1)),
            ("w".to_string(), r(1)),
        ]);
        assert_eq!(p.eval(&binds).unwrap(), r(4));
    }

    #[test]
    fn eval_missing_binding_names_variable() {
        let p = rv("r") + rv("s");
        let binds = BTreeMap::from([("r".to_string(), r(1))]);
        assert_eq!(p.eval(&binds), Err(Error::MissingBinding("s".to_string())));
    }

    #[test]
    fn eval_poles_of_paper_denominators() {
        // (r-1)^2 at r=1 and r^4-2r^3+8r^2+2r-9 at r=1 both vanish
        let rr = rv("r");
        let p = (rr.clone() - Poly::from_integer(1)) * (rr.clone() - Poly::from_integer(1));
        let binds = BTreeMap::from([("r".to_string(), r(1))]);
        assert_eq!(p.eval(&binds).unwrap(), r(0));

        let p4 = rv("r") * rv("r") * rv("r") * rv("r");
        let p3 = rv("r") * rv("r") * rv("r");
        let p2 = rv("r") * rv("r");
        let den = p4 - Poly::from_integer(2) * p3 + Poly::from_integer(8) * p2
            + Poly::from_integer(2) * rv("r")
            - Poly::from_integer(9);
        assert_eq!(den.eval(&binds).unwrap(), r(0));
    }

    #[test]
    fn exact_division() {
        let p = rv("r") * rv("r") - Poly::from_integer(1);
        let d1 = rv("r") - Poly::from_integer(1);
        let d2 = rv("r") + Poly::from_integer(1);
        assert_eq!(p.exact_div(&d1), Some(d2.clone()));
        let not_divisor = rv("r") - Poly::from_integer(2);
        assert_eq!(p.exact_div(&not_divisor), None);
        assert_eq!(p.exact_div(&Poly::zero()), None);
    }

    #[test]
    fn univariate_coeffs_ascending() {
        let p = rv("r") * rv("r") * Poly::from_integer(2) + Poly::from_integer(5);
        assert_eq!(p.univariate_coeffs("r").unwrap(), vec![r(5), r(0), r(2)]);
        let q = rv("r") + rv("s");
        assert!(q.univariate_coeffs("r").is_err());
        assert_eq!(Poly::from_integer(7).univariate_coeffs("r").unwrap(), vec![r(7)]);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let p = rv("r");
        let mut big = Poly::one();
        for _ in 0..poly_degree_cap() {
            big = big * p.clone();
        }
        assert!(big.checked_mul(&p).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..4, 0u32..4, -5i64..6), 0..5).prop_map(|terms| {
            let mut p = Poly::zero();
            for (er, es, c) in terms {
                let mut t = Poly::constant(r(c));
                for _ in 0..er {
                    t = t * rv("r");
                }
                for _ in 0..es {
                    t = t * rv("s");
                }
                p = p + t;
            }
            p
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
            prop_assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
            prop_assert_eq!(
                (a.clone() * b.clone()) * c.clone(),
                a.clone() * (b.clone() * c.clone())
            );
            prop_assert_eq!(
                a.clone() * (b.clone() + c.clone()),
                a.clone() * b.clone() + a.clone() * c.clone()
            );
            prop_assert_eq!(a.clone() - a.clone(), Poly::zero());
        }

        #[test]
        fn eval_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly(),
                                       vr in -4i64..5, vs in -4i64..5) {
            let binds = BTreeMap::from([
                ("r".to_string(), r(vr)),
                ("s".to_string(), r(vs)),
            ]);
            let ea = a.eval(&binds).unwrap();
            let eb = b.eval(&binds).unwrap();
            prop_assert_eq!((a.clone() + b.clone()).eval(&binds).unwrap(), ea.clone() + eb.clone());
            prop_assert_eq!((a.clone() * b.clone()).eval(&binds).unwrap(), ea * eb);
        }

        #[test]
        fn product_divides_back(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.is_zero());
            let p = a.clone() * b.clone();
            prop_assert_eq!(p.exact_div(&b), Some(a));
        }
    }
}
