//! Tagged scalar used at I/O boundaries, where the ring is detected from text.

use std::fmt;

use num_traits::Zero;

use super::{parse_rational, Int, Poly, Rational};
use crate::error::Result;

/// One element of Integer, Rational or Poly. Arithmetic stays inside a single
/// ring: heterogeneous inputs are promoted *once*, explicitly, with
/// [`RingElem::promote_all`], never mixed term-by-term.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RingElem {
    Int(Int),
    Rat(Rational),
    Poly(Poly),
}

impl RingElem {
    /// Parse one element in ring text form. Integers and rationals use their
    /// plain text forms; anything else is read as a polynomial expression.
    pub fn parse(text: &str) -> Result<RingElem> {
        let t = text.trim();
        if t.chars().all(|c| c.is_ascii_digit() || c == '+' || c == '-')
            && t.chars().any(|c| c.is_ascii_digit())
        {
            if let Ok(n) = t.parse::<Int>() {
                return Ok(RingElem::Int(n));
            }
        }
        if t.contains('/') && !t.contains(|c: char| c.is_ascii_alphabetic()) {
            if let Ok(q) = parse_rational(t) {
                return Ok(RingElem::Rat(q));
            }
        }
        crate::cfexpr::parse_poly(t).map(RingElem::Poly)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Int(n) => n.is_zero(),
            RingElem::Rat(q) => q.is_zero(),
            RingElem::Poly(p) => p.is_zero(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            RingElem::Int(_) => 0,
            RingElem::Rat(_) => 1,
            RingElem::Poly(_) => 2,
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            RingElem::Int(n) => Some(Rational::from_integer(n.clone())),
            RingElem::Rat(q) => Some(q.clone()),
            RingElem::Poly(p) if p.is_constant() => Some(p.constant_term()),
            RingElem::Poly(_) => None,
        }
    }

    pub fn to_poly(&self) -> Poly {
        match self {
            RingElem::Int(n) => Poly::constant(Rational::from_integer(n.clone())),
            RingElem::Rat(q) => Poly::constant(q.clone()),
            RingElem::Poly(p) => p.clone(),
        }
    }

    /// Lift a heterogeneous list into the finest ring that holds every
    /// element: all-Int, else all-Rat, else all-Poly.
    pub fn promote_all(elems: &[RingElem]) -> Homogeneous {
        let top = elems.iter().map(RingElem::rank).max().unwrap_or(0);
        match top {
            0 => Homogeneous::Int(
                elems
                    .iter()
                    .map(|e| match e {
                        RingElem::Int(n) => n.clone(),
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            1 => Homogeneous::Rat(elems.iter().map(|e| e.to_rational().expect("rank<=1")).collect()),
            _ => Homogeneous::Poly(elems.iter().map(RingElem::to_poly).collect()),
        }
    }
}

/// A list of elements promoted into one concrete ring.
pub enum Homogeneous {
    Int(Vec<Int>),
    Rat(Vec<Rational>),
    Poly(Vec<Poly>),
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Int(n) => n.fmt(f),
            RingElem::Rat(q) => q.fmt(f),
            RingElem::Poly(p) => p.fmt(f),
        }
    }
}
