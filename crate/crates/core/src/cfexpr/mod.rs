//! Parser and expansion engine for generalized Jacobi continued-fraction
//! expressions: self-referential equations `g = E(x, g)` built from rational
//! literals, parameters, `x`, `g`, the four arithmetic operators, integer
//! powers and parentheses.
//!
//! Grammar (no implicit multiplication):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := rational | name | 'x' | 'g' | '(' expr ')'
//! ```

mod expand;
mod jfraction;
mod parse;

pub use expand::{eval_scalar, eval_series, expand_fixpoint, expand_quadratic};
pub use jfraction::JFraction;
pub use parse::parse;

use std::fmt;

use num_traits::Signed;

use crate::exact::{Poly, Rational};
use crate::error::Result;

/// Expression AST. `SelfRef` is the `g` in `g = E(x, g)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CFExpr {
    Lit(Rational),
    Param(String),
    X,
    SelfRef,
    Neg(Box<CFExpr>),
    Add(Box<CFExpr>, Box<CFExpr>),
    Sub(Box<CFExpr>, Box<CFExpr>),
    Mul(Box<CFExpr>, Box<CFExpr>),
    Div(Box<CFExpr>, Box<CFExpr>),
    Pow(Box<CFExpr>, u32),
}

impl CFExpr {
    /// True if the expression mentions the self-reference symbol.
    pub fn has_self_ref(&self) -> bool {
        match self {
            CFExpr::SelfRef => true,
            CFExpr::Lit(_) | CFExpr::Param(_) | CFExpr::X => false,
            CFExpr::Neg(a) | CFExpr::Pow(a, _) => a.has_self_ref(),
            CFExpr::Add(a, b) | CFExpr::Sub(a, b) | CFExpr::Mul(a, b) | CFExpr::Div(a, b) => {
                a.has_self_ref() || b.has_self_ref()
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            // a literal prints as "-n" or "n/d": give it the precedence of
            // the expression its text form reads back as
            CFExpr::Lit(q) if q.is_negative() => 1,
            CFExpr::Lit(q) if !q.is_integer() => 2,
            CFExpr::Neg(_) | CFExpr::Add(..) | CFExpr::Sub(..) => 1,
            CFExpr::Mul(..) | CFExpr::Div(..) => 2,
            CFExpr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.prec() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for CFExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CFExpr::Lit(q) => write!(f, "{q}"),
            CFExpr::Param(p) => write!(f, "{p}"),
            CFExpr::X => write!(f, "x"),
            CFExpr::SelfRef => write!(f, "g"),
            CFExpr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_child(f, 2)
            }
            CFExpr::Add(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " + ")?;
                b.fmt_child(f, 2)
            }
            CFExpr::Sub(a, b) => {
                a.fmt_child(f, 1)?;
                write!(f, " - ")?;
                b.fmt_child(f, 2)
            }
            CFExpr::Mul(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "*")?;
                b.fmt_child(f, 3)
            }
            CFExpr::Div(a, b) => {
                a.fmt_child(f, 2)?;
                write!(f, "/")?;
                b.fmt_child(f, 3)
            }
            CFExpr::Pow(a, e) => {
                a.fmt_child(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

/// Parse a plain polynomial expression (no `x`, no `g`); every identifier
/// becomes a polynomial variable. This is the reader for the polynomial text
/// form used in CSV files and reports.
pub fn parse_poly(text: &str) -> Result<Poly> {
    let names = parse::scan_identifiers(text)?;
    let expr = parse(text, &names.iter().map(String::as_str).collect::<Vec<_>>())?;
    let binds: std::collections::BTreeMap<String, Poly> =
        names.iter().map(|n| (n.clone(), Poly::var(n))).collect();
    eval_scalar(&expr, &binds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str) -> CFExpr {
        parse(text, &["r", "s", "t", "u", "v", "w"]).unwrap()
    }

    #[test]
    fn parses_continued_fraction_forms() {
        p("1/(1-x)");
        p("1/(1 - x*(1+3*x)/(1-x) + x^2*(1+2*x)/(1-x) - x^3*g)");
        p("1/(1 - x/(1-r*x) - s*x^2*g)");
    }

    #[test]
    fn rejects_unknown_identifier_with_position()  {
        let err = parse("1 + q", &["r"]).unwrap_err();
        assert_eq!(
            err,
            crate::error::Error::UnknownIdentifier { name: "q".to_string(), pos: 4 }
        );
    }

    #[test]
    fn rejects_syntax_errors_with_position() {
        assert!(matches!(
            parse("1 +", &[]),
            Err(crate::error::Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse("x^(2)", &[]),
            Err(crate::error::Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse("x x", &[]),
            Err(crate::error::Error::SyntaxError { .. })
        ));
        assert!(matches!(
            parse("x^-1", &[]),
            Err(crate::error::Error::SyntaxError { .. })
        ));
    }

    #[test]
    fn literal_division_folds_to_a_rational() {
        assert_eq!(p("23359/3"), CFExpr::Lit(Rational::new(23359.into(), 3.into())));
        assert_eq!(p("-1/2"), CFExpr::Lit(Rational::new((-1).into(), 2.into())));
        assert!(parse("1/0", &[]).is_err());
    }

    #[test]
    fn printer_reparses_to_the_same_ast() {
        for text in [
            "1/(1 - x*(1+3*x)/(1-x) + x^2*(1+2*x)/(1-x) - x^3*g)",
            "1/(1 - x/(1-r*x) - s*x^2*g)",
            "-x^3*g + (1-x)^2/(1-2*x)^2",
            "1 - 2*x - (r+1)*x^2 - s*x^3",
        ] {
            let ast = p(text);
            assert_eq!(p(&ast.to_string()), ast, "round-trip failed for {text}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = CFExpr> {
        let leaf = prop_oneof![
            (-9i64..10, 1i64..5).prop_map(|(n, d)| CFExpr::Lit(Rational::new(n.into(), d.into()))),
            Just(CFExpr::X),
            Just(CFExpr::SelfRef),
            Just(CFExpr::Param("r".to_string())),
            Just(CFExpr::Param("s".to_string())),
        ];
        leaf.prop_recursive(5, 32, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CFExpr::Add(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CFExpr::Sub(a.into(), b.into())),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| CFExpr::Mul(a.into(), b.into())),
                (inner.clone(), 1u32..4).prop_map(|(a, e)| CFExpr::Pow(a.into(), e)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            let back = parse(&text, &["r", "s"]).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
