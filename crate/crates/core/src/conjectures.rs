//! Catalog of conjectured Somos families: for each id, the generalized
//! continued fraction that generates the family, its Catalan (stretched
//! Riordan) form, and the predicted Somos parameters as exact rational
//! functions of the bindings. On top of that, a per-case verification
//! pipeline and a parameter-sweep harness.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cfexpr::{self, expand_fixpoint, expand_quadratic, CFExpr};
use crate::error::{Error, Result};
use crate::exact::{Rational, Ring, SolveStatus};
use crate::hankel::hankel_transform;
use crate::riordan::{FamilyId, RiordanArray};
use crate::series::{catalan_gf, Series};
use crate::somos::{somos_check, somos_fit, FitResult, SomosRelation};

/// Default sequence length / Hankel depth for Somos-4 and Somos-6 cases.
pub const DESK_TERMS: usize = 40;
pub const DESK_HANKEL: usize = 12;
/// Somos-8 fits need more rows: h_0..h_17 from 45 terms.
pub const DESK_TERMS_SOMOS8: usize = 45;
pub const DESK_HANKEL_SOMOS8: usize = 17;

/// Static description of one catalog entry.
pub struct ConjectureDef {
    pub id: &'static str,
    pub params: &'static [&'static str],
    /// Optional `name=value` defaults applied before validation.
    pub default_params: &'static [(&'static str, &'static str)],
    pub somos_order: usize,
    /// Free positions of the fitted relation (`false` pins a zero).
    pub mask: &'static [bool],
    /// The generalized continued fraction `g = E(x, g)`, in the DSL.
    pub cf: &'static str,
    /// Catalan form: `g = catalan_g * c(catalan_mult)`, multiplier stretched
    /// by `stretch`.
    pub catalan_g: &'static str,
    pub catalan_mult: &'static str,
    pub stretch: usize,
    /// Closed-form binomial family realizing the same sequence, if printed.
    pub family: Option<FamilyId>,
    /// Predicted Somos parameters as (numerator, denominator) expressions.
    pub predicted: &'static [(&'static str, &'static str)],
    /// Known discrepancies in the source material, echoed in every report.
    pub notes: &'static [&'static str],
}

impl ConjectureDef {
    pub fn default_terms(&self) -> usize {
        if self.somos_order == 8 {
            DESK_TERMS_SOMOS8
        } else {
            DESK_TERMS
        }
    }

    pub fn default_hankel_terms(&self) -> usize {
        if self.somos_order == 8 {
            DESK_HANKEL_SOMOS8
        } else {
            DESK_HANKEL
        }
    }
}

static CATALOG: &[ConjectureDef] = &[
    ConjectureDef {
        id: "C1",
        params: &["r", "s"],
        default_params: &[],
        somos_order: 4,
        mask: &[true, true],
        cf: "1/(1 - (1+r*x)/(1-x)*x - s*x^2*g)",
        catalan_g: "(1-x)/(1-2*x-r*x^2)",
        catalan_mult: "s*x^2*(1-x)^2/(1-2*x-r*x^2)^2",
        stretch: 1,
        family: None,
        predicted: &[("0", "1"), ("s^2*(r+s+1)^2", "1")],
        notes: &[],
    },
    ConjectureDef {
        id: "C2",
        params: &["r", "s"],
        default_params: &[],
        somos_order: 4,
        mask: &[true, true],
        cf: "1/(1 - (1+r*x)/(1-x)*x - s*x^2/(1-x)*g)",
        catalan_g: "(1-x)/(1-2*x-r*x^2)",
        catalan_mult: "s*x^2*(1-x)/(1-2*x-r*x^2)^2",
        stretch: 1,
        family: None,
        predicted: &[("s^2", "1"), ("s^2*(r+(r+s)^2)", "1")],
        notes: &[],
    },
    ConjectureDef {
        id: "C3",
        params: &["r", "s"],
        default_params: &[],
        somos_order: 4,
        mask: &[true, true],
        cf: "1/(1 - (1+r*x)/(1-x)*x - (1+s*x)/(1-x)*x^2*g)",
        catalan_g: "(1-x)/(1-2*x-r*x^2)",
        catalan_mult: "x^2*(1-x)*(1+s*x)/(1-2*x-r*x^2)^2",
        stretch: 1,
        family: None,
        predicted: &[("(s+1)^2", "1"), ("1+r^2-6*s-3*s^2-r*(s^2+2*s-3)", "1")],
        notes: &[],
    },
    ConjectureDef {
        id: "C4",
        params: &["r", "s", "v", "w"],
        default_params: &[],
        somos_order: 4,
        mask: &[true, true],
        cf: "1/(1 - v*(1+r*x)/(1-x)*x - w*(1+s*x)/(1-x)*x^2*g)",
        catalan_g: "(1-x)/(1-(v+1)*x-v*r*x^2)",
        catalan_mult: "w*x^2*(1-x)*(1+s*x)/(1-(v+1)*x-v*r*x^2)^2",
        stretch: 1,
        family: None,
        predicted: &[
            ("(s+v)^2*w^2", "1"),
            (
                "w^2*(r^2*v^2+w*(w+v-v^2)+r*v*(v+2*w)-s^2*(v*(r+1)+2*w)-s*((r+1)*v^2+w+v*(r+1+3*w)))",
                "1",
            ),
        ],
        notes: &[
            "the printed Catalan-form denominator reads 1-(v+1)x-rx^2; matching the continued fraction requires 1-(v+1)x-vrx^2, and the corrected form is used",
        ],
    },
    ConjectureDef {
        id: "C5",
        params: &["r", "s", "t", "u", "v"],
        default_params: &[("u", "1"), ("v", "1")],
        somos_order: 6,
        mask: &[true, false, true],
        cf: "1/(1 - x*(1+r*x)/(1-x) - x^2*(1+s*x)/(1-x) - t*x^3*g)",
        catalan_g: "(1-x)/(1-2*x-(r+1)*x^2-s*x^3)",
        catalan_mult: "t*x^3*(1-x)^2/(1-2*x-(r+1)*x^2-s*x^3)^2",
        stretch: 2,
        family: Some(FamilyId::Conj5),
        predicted: &[
            ("t^2*(r+2)^2", "1"),
            ("0", "1"),
            (
                "t^3*(r^3*t+r^2*(s+7*t)+2*r*(s^2+2*(t+1)*s+t*(t+8))+s^3+s^2*(3*t+4)+s*(t+2)*(3*t+2)+t*(t^2+4*t+12))",
                "1",
            ),
        ],
        notes: &[
            "the printed general term of this family omits a binom(i,m) factor and drops a -k inside binom(m, n-k-j-i-m); the corrected sum is used and verified against the series",
        ],
    },
    ConjectureDef {
        id: "C6",
        params: &["r"],
        default_params: &[],
        somos_order: 8,
        mask: &[true, true, true, true],
        cf: "1/(1 - x/(1-r*x) - x^2 - x^3*g)",
        catalan_g: "(1-r*x)/(1-(r+1)*x-x^2+r*x^3)",
        catalan_mult: "x^3*(1-r*x)^2/(1-(r+1)*x-x^2+r*x^3)^2",
        stretch: 2,
        family: Some(FamilyId::Conj6),
        predicted: &[
            ("-(-r^8+8*r^7-21*r^6+40*r^5-35*r^4+24*r^3-71*r^2-8*r)", "r^4-2*r^3+8*r^2+2*r-9"),
            ("8*(r^9-6*r^8+17*r^7-30*r^6+15*r^5-14*r^4-r^3-14*r^2)", "r^4-2*r^3+8*r^2+2*r-9"),
            ("8*(r^10-2*r^8+29*r^7-32*r^6+39*r^5+18*r^4+11*r^3-r^2+r)", "r^3-r^2+7*r+9"),
            (
                "-(-2*r^13+13*r^12-48*r^11+85*r^10-83*r^9+11*r^8-124*r^7+454*r^6-364*r^5+263*r^4+84*r^3+189*r^2+25*r+9)",
                "r^4-2*r^3+8*r^2+2*r-9",
            ),
        ],
        notes: &[],
    },
    ConjectureDef {
        id: "C7",
        params: &["r"],
        default_params: &[],
        somos_order: 8,
        mask: &[true, true, true, true],
        cf: "1/(1 - x - x^2/(1-r*x) - x^3*g)",
        catalan_g: "(1-r*x)/(1-(r+1)*x+(r-1)*x^2)",
        catalan_mult: "x^3*(1-r*x)^2/(1-(r+1)*x+(r-1)*x^2)^2",
        stretch: 2,
        family: Some(FamilyId::Conj7),
        predicted: &[
            ("-(-r^4+11*r^3-26*r^2+16*r+5)", "r^2-4*r+3"),
            ("-(-2*r^5+19*r^4-40*r^3+13*r^2+5*r)", "r^2-4*r+3"),
            ("-(-3*r^6+12*r^5-15*r^4-25*r^3+62*r^2+36*r+5)", "r-3"),
            ("-(-r^9+8*r^8-26*r^7+43*r^6-40*r^5+17*r^4+23*r^3-27*r^2-19*r-3)", "r^2-4*r+3"),
        ],
        notes: &[],
    },
    ConjectureDef {
        id: "C8",
        params: &["r"],
        default_params: &[],
        somos_order: 8,
        mask: &[true, true, true, true],
        cf: "1/(1 - (1-(r-1)*x)/(1-r*x)*x - x^2 - x^3*g)",
        catalan_g: "(1-r*x)/(1-(r+1)*x+(r-2)*x^2+r*x^3)",
        catalan_mult: "x^3*(1-r*x)^2/(1-(r+1)*x+(r-2)*x^2+r*x^3)^2",
        stretch: 2,
        family: Some(FamilyId::Conj8),
        predicted: &[
            ("-(r^7-8*r^6+25*r^5-20*r^4-37*r^3+75*r+28)", "2*(r^3-3*r^2-5*r+7)"),
            (
                "(r+1)*(r^8-11*r^7+47*r^6-83*r^5+17*r^4+71*r^3+45*r^2-169*r+210)",
                "2*(r^3-3*r^2-5*r+7)",
            ),
            (
                "(r^2-1)*(3*r^8-29*r^7+115*r^6-225*r^5+181*r^4+105*r^3-255*r^2-235*r+84)",
                "2*(r^3-3*r^2-5*r+7)",
            ),
            (
                "-(r^10-17*r^9+96*r^8-212*r^7+54*r^6+594*r^5-796*r^4-36*r^3+721*r^2-329*r-588)",
                "2*(r^3-3*r^2-5*r+7)",
            ),
        ],
        notes: &[
            "the printed Catalan-form denominator reads 1+(r+1)x+...; the sign of the linear term must be negative to match the continued fraction, and the corrected form is used",
        ],
    },
    ConjectureDef {
        id: "EX1R",
        params: &["r"],
        default_params: &[("r", "1")],
        somos_order: 4,
        mask: &[true, true],
        cf: "1/(1 - x/(1-r*x) - x^2*g)",
        catalan_g: "(1-r*x)/(1-(r+1)*x)",
        catalan_mult: "x^2*(1-r*x)^2/(1-(r+1)*x)^2",
        stretch: 1,
        family: Some(FamilyId::Ex1),
        predicted: &[("(r-1)^2", "1"), ("4*r", "1")],
        notes: &[],
    },
    ConjectureDef {
        id: "EX6A",
        params: &[],
        default_params: &[],
        somos_order: 8,
        mask: &[true, true, true, true],
        cf: "1/(1 - x*(1-3*x)/(1-4*x) - x^3*g)",
        catalan_g: "(1-4*x)/(1-5*x+3*x^2)",
        catalan_mult: "x^3*(1-4*x)^2/(1-5*x+3*x^2)^2",
        stretch: 2,
        family: None,
        predicted: &[("-101/3", "1"), ("-484/3", "1"), ("4299", "1"), ("23359/3", "1")],
        notes: &[],
    },
    ConjectureDef {
        id: "EX6B",
        params: &[],
        default_params: &[],
        somos_order: 8,
        mask: &[true, true, true, true],
        cf: "1/(1 - x - x^2*(1-x)/(1-2*x) - x^3*g)",
        catalan_g: "(1-2*x)/(1-3*x+x^2+x^3)",
        catalan_mult: "x^3*(1-2*x)^2/(1-3*x+x^2+x^3)^2",
        stretch: 2,
        family: None,
        predicted: &[("1/2", "1"), ("-5/2", "1"), ("11/2", "1"), ("17/2", "1")],
        notes: &[],
    },
];

/// Look up a catalog entry; ids are case-sensitive (`C1`..`C8`, `EX1R`,
/// `EX6A`, `EX6B`).
pub fn conjecture_def(id: &str) -> Result<&'static ConjectureDef> {
    CATALOG.iter().find(|d| d.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
}

pub fn all_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|d| d.id).collect()
}

fn parse_dsl(def: &ConjectureDef, text: &str) -> CFExpr {
    cfexpr::parse(text, def.params).expect("catalog expressions parse")
}

/// Fill in defaults, then reject unknown or missing parameters.
pub fn complete_bindings(
    def: &ConjectureDef,
    binds: &BTreeMap<String, Rational>,
) -> Result<BTreeMap<String, Rational>> {
    for name in binds.keys() {
        if !def.params.contains(&name.as_str()) {
            return Err(Error::Invalid(format!(
                "`{}` takes parameters {{{}}}, not `{name}`",
                def.id,
                def.params.join(", ")
            )));
        }
    }
    let mut full = binds.clone();
    for (name, value) in def.default_params {
        full.entry(name.to_string())
            .or_insert_with(|| crate::exact::parse_rational(value).expect("catalog default"));
    }
    for name in def.params {
        if !full.contains_key(*name) {
            return Err(Error::MissingBinding(name.to_string()));
        }
    }
    Ok(full)
}

impl ConjectureDef {
    /// Only the Somos-6 family takes the extra (u, v) weights.
    fn supports_weights(&self) -> bool {
        self.id == "C5"
    }
}

fn is_weighted(def: &ConjectureDef, binds: &BTreeMap<String, Rational>) -> bool {
    def.supports_weights()
        && ["u", "v"].iter().any(|n| binds.get(*n).is_some_and(|q| !q.is_one()))
}

/// The stretched Riordan array of the (corrected) printed Catalan form.
///
/// The array is built with `stretch` extra orders of slack so that entries
/// and applications up to `order` stay exact after the multiplier is split
/// into `x^stretch * f`.
pub fn family_riordan<T: Ring>(
    id: &str,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<RiordanArray<T>> {
    let def = conjecture_def(id)?;
    let work = order + def.stretch;
    let g = cfexpr::eval_series(&parse_dsl(def, def.catalan_g), binds, None, work)?;
    let mult = cfexpr::eval_series(&parse_dsl(def, def.catalan_mult), binds, None, work)?;
    RiordanArray::from_multiplier(g, mult, def.stretch)
}

/// The family sequence via the Riordan route: apply the stretched array to
/// the Catalan numbers. Handles the (u, v) weighting of C5 by substituting
/// `x -> v x` and scaling the multiplier by `u`.
pub fn family_series<T: Ring>(
    id: &str,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<Series<T>> {
    let def = conjecture_def(id)?;
    let (u, v) = if def.supports_weights() {
        (
            binds.get("u").cloned().unwrap_or_else(T::one),
            binds.get("v").cloned().unwrap_or_else(T::one),
        )
    } else {
        (T::one(), T::one())
    };
    let array = family_riordan(id, binds, order)?;
    let (g, mult) = if u.is_one() && v.is_one() {
        (array.g().clone(), array.multiplier())
    } else {
        // g_n = sum_k t_{n-2k,k} u^k v^{n-2k} C_k  <=>  g0(vx) * c(u x^2 f(vx))
        let mult = array.f().scale_arg(&v).scale(&u).shift_up(def.stretch);
        (array.g().scale_arg(&v), mult)
    };
    let mult = mult.truncate(order);
    let cat = match mult.valuation() {
        None => catalan_gf::<T>(0), // degenerate multiplier: c(0) = 1
        Some(val) => catalan_gf::<T>(order / val),
    };
    Ok(g.mul(&cat.compose(&mult)?))
}

/// Expand the family's continued fraction by fixed-point iteration.
pub fn cf_series<T: Ring>(
    id: &str,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<Series<T>> {
    let def = conjecture_def(id)?;
    expand_fixpoint(&parse_dsl(def, def.cf), binds, order)
}

/// Expand the family's continued fraction through its quadratic closed form.
pub fn cf_series_quadratic<T: Ring>(
    id: &str,
    binds: &BTreeMap<String, T>,
    order: usize,
) -> Result<Series<T>> {
    let def = conjecture_def(id)?;
    expand_quadratic(&parse_dsl(def, def.cf), binds, order)
}

/// Predicted Somos parameters, or a pole of the printed formulas.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Predicted {
    Params(Vec<Rational>),
    Pole,
}

/// Evaluate the printed parameter formulas exactly; a vanishing denominator
/// reports a pole instead of failing.
pub fn predicted_params(id: &str, binds: &BTreeMap<String, Rational>) -> Result<Predicted> {
    let def = conjecture_def(id)?;
    let binds = complete_bindings(def, binds)?;
    let mut out = Vec::with_capacity(def.predicted.len());
    for (num, den) in def.predicted {
        let den = cfexpr::eval_scalar(&parse_dsl(def, den), &binds)?;
        if den.is_zero() {
            return Ok(Predicted::Pole);
        }
        let num = cfexpr::eval_scalar(&parse_dsl(def, num), &binds)?;
        out.push(num / den);
    }
    Ok(Predicted::Params(out))
}

/// One verification case: conjecture id, exact bindings, sequence length and
/// Hankel depth (`hankel_terms <= (terms - 1) / 2`).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConjectureCase {
    pub id: String,
    pub bindings: BTreeMap<String, Rational>,
    pub terms: usize,
    pub hankel_terms: usize,
}

impl ConjectureCase {
    pub fn new(id: &str, bindings: BTreeMap<String, Rational>) -> Result<Self> {
        let def = conjecture_def(id)?;
        Ok(ConjectureCase {
            id: id.to_string(),
            bindings,
            terms: def.default_terms(),
            hankel_terms: def.default_hankel_terms(),
        })
    }

    pub fn with_budget(mut self, terms: usize, hankel_terms: usize) -> Self {
        self.terms = terms;
        self.hankel_terms = hankel_terms;
        self
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Confirmed,
    RefutedAt(usize),
    Pole,
    ZeroHankel,
    Underdetermined,
}

impl Verdict {
    pub fn as_str(&self) -> String {
        match self {
            Verdict::Confirmed => "confirmed".to_string(),
            Verdict::RefutedAt(_) => "refuted-at-n".to_string(),
            Verdict::Pole => "degenerate(pole)".to_string(),
            Verdict::ZeroHankel => "degenerate(zero-hankel)".to_string(),
            Verdict::Underdetermined => "degenerate(underdetermined)".to_string(),
        }
    }

    pub fn is_confirmed(&self) -> bool {
        matches!(self, Verdict::Confirmed)
    }
}

/// Everything a case produced, every intermediate included.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CaseReport {
    pub id: String,
    pub params: BTreeMap<String, Rational>,
    pub terms: usize,
    pub hankel_terms: usize,
    pub sequence: Vec<Rational>,
    pub hankel: Vec<Rational>,
    pub fit: Option<FitResult>,
    pub predicted: Option<Vec<Rational>>,
    pub verdict: Verdict,
    pub failing_n: Option<usize>,
    pub notes: Vec<String>,
}

/// Run the full pipeline for one case: generate the sequence two ways
/// (continued fraction, Riordan-Catalan), take the Hankel transform, fit the
/// masked Somos relation, and test the predicted parameters for membership
/// plus a direct cross-multiplied check.
pub fn run_case(case: &ConjectureCase) -> Result<CaseReport> {
    let def = conjecture_def(&case.id)?;
    let binds = complete_bindings(def, &case.bindings)?;
    if case.terms < 2 * case.hankel_terms + 1 {
        return Err(Error::InsufficientTerms {
            needed: 2 * case.hankel_terms + 1,
            got: case.terms,
        });
    }
    let mut notes: Vec<String> = def.notes.iter().map(|s| s.to_string()).collect();
    let order = case.terms - 1;

    let weighted = is_weighted(def, &binds);
    let riordan_route = family_series(&case.id, &binds, order)?;
    let sequence: Vec<Rational> = if weighted {
        // no continued fraction is available for the weighted family
        notes.push("weighted (u,v) family: existence-only check, no predicted parameters".into());
        riordan_route.clone().into_coeffs()
    } else {
        let cf_route = cf_series(&case.id, &binds, order)?;
        if cf_route != riordan_route {
            return Err(Error::OracleMismatch(format!(
                "continued-fraction and Riordan expansions differ for {}",
                case.id
            )));
        }
        cf_route.into_coeffs()
    };

    let hankel = hankel_transform(&sequence, case.hankel_terms)?;
    let k = def.somos_order;
    let zero_in_window = hankel.iter().any(Zero::is_zero);
    if zero_in_window {
        notes.push("hankel prefix contains zero terms".into());
    }

    let fit = somos_fit(&hankel, k, Some(def.mask))?;

    let predicted = if weighted {
        None
    } else {
        match predicted_params(&case.id, &binds)? {
            Predicted::Pole => {
                return Ok(CaseReport {
                    id: case.id.clone(),
                    params: binds,
                    terms: case.terms,
                    hankel_terms: case.hankel_terms,
                    sequence,
                    hankel,
                    fit: Some(fit),
                    predicted: None,
                    verdict: Verdict::Pole,
                    failing_n: None,
                    notes,
                })
            }
            Predicted::Params(p) => Some(p),
        }
    };

    let (verdict, failing_n) = decide(&hankel, &fit, predicted.as_deref(), k, zero_in_window, &mut notes);

    Ok(CaseReport {
        id: case.id.clone(),
        params: binds,
        terms: case.terms,
        hankel_terms: case.hankel_terms,
        sequence,
        hankel,
        fit: Some(fit),
        predicted,
        verdict,
        failing_n,
        notes,
    })
}

fn decide(
    hankel: &[Rational],
    fit: &FitResult,
    predicted: Option<&[Rational]>,
    order: usize,
    zero_in_window: bool,
    notes: &mut Vec<String>,
) -> (Verdict, Option<usize>) {
    // a fit with no constraining rows confirms nothing
    if fit.status != SolveStatus::Inconsistent && fit.nontrivial_rows == 0 {
        let verdict = if zero_in_window { Verdict::ZeroHankel } else { Verdict::Underdetermined };
        return (verdict, None);
    }

    let Some(predicted) = predicted else {
        // existence-only mode: any consistent fit with constraining rows
        return match fit.status {
            SolveStatus::Inconsistent => (Verdict::RefutedAt(fit.first_failing.unwrap_or(order)), fit.first_failing),
            _ => {
                if fit.status == SolveStatus::Underdetermined {
                    notes.push("fit is underdetermined on this prefix".into());
                }
                (Verdict::Confirmed, None)
            }
        };
    };

    // full tuple with masked zeros for the direct check
    let rel = match SomosRelation::with_mask(order, predicted.to_vec(), fit.mask.clone()) {
        Ok(rel) => rel,
        Err(_) => {
            // predicted tuple violates the mask (nonzero where the shape
            // pins a zero): treat as a refutation via the unmasked check
            let rel = SomosRelation::new(order, predicted.to_vec()).expect("full relation");
            let report = somos_check(hankel, &rel);
            let n = report.first_failing();
            push_failure_notes(&report, notes);
            return match n {
                Some(n) => (Verdict::RefutedAt(n), Some(n)),
                None => (Verdict::Confirmed, None),
            };
        }
    };
    let report = somos_check(hankel, &rel);
    let member = fit.status != SolveStatus::Inconsistent && fit.contains(predicted);

    if member && report.passed() {
        if fit.status == SolveStatus::Underdetermined {
            notes.push("fit is underdetermined on this prefix; membership and direct check both hold".into());
        }
        (Verdict::Confirmed, None)
    } else {
        push_failure_notes(&report, notes);
        let n = report.first_failing();
        match n {
            Some(n) => (Verdict::RefutedAt(n), Some(n)),
            // membership failed yet every identity holds: data exhausted
            None => (Verdict::Underdetermined, None),
        }
    }
}

fn push_failure_notes(report: &crate::somos::CheckReport, notes: &mut Vec<String>) {
    for f in report.failures.iter().take(3) {
        notes.push(format!(
            "bilinear identity fails at n={}: lhs={}, rhs={}",
            f.n, f.lhs, f.rhs
        ));
    }
}

/// Summary counts of a sweep.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SweepSummary {
    pub total: usize,
    pub confirmed: usize,
    pub refuted: usize,
    pub degenerate: usize,
}

/// Run one case per grid point, in row-major order with parameter names
/// sorted; per-case failures become reports, never panics.
pub fn sweep(
    id: &str,
    grid: &BTreeMap<String, Vec<Rational>>,
    terms: usize,
    hankel_terms: usize,
) -> Result<(Vec<CaseReport>, SweepSummary)> {
    let def = conjecture_def(id)?;
    let names: Vec<&String> = grid.keys().collect();
    for name in &names {
        if !def.params.contains(&name.as_str()) {
            return Err(Error::Invalid(format!("`{}` has no parameter `{name}`", def.id)));
        }
    }
    let mut reports = Vec::new();
    let mut summary = SweepSummary::default();
    let sizes: Vec<usize> = names.iter().map(|n| grid[*n].len()).collect();
    let total: usize = sizes.iter().product();
    for flat in 0..total {
        let mut idx = flat;
        let mut bindings = BTreeMap::new();
        for (dim, name) in names.iter().enumerate().rev() {
            let size = sizes[dim];
            bindings.insert((*name).clone(), grid[*name][idx % size].clone());
            idx /= size;
        }
        let case = ConjectureCase::new(id, bindings)?.with_budget(terms, hankel_terms);
        let report = run_case(&case)?;
        summary.total += 1;
        match report.verdict {
            Verdict::Confirmed => summary.confirmed += 1,
            Verdict::RefutedAt(_) => summary.refuted += 1,
            _ => summary.degenerate += 1,
        }
        reports.push(report);
    }
    Ok((reports, summary))
}

// ---------------------------------------------------------------------------
// report documents
// ---------------------------------------------------------------------------

/// Serializable form of a case report, with every scalar in ring text form
/// and a stable field order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CaseReportDoc {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub terms: usize,
    pub hankel_terms: usize,
    pub sequence: Vec<String>,
    pub hankel: Vec<String>,
    pub fit_status: String,
    pub fit_solution: Option<Vec<String>>,
    pub fit_basis: Vec<Vec<String>>,
    pub predicted: Option<Vec<String>>,
    pub verdict: String,
    pub failing_n: Option<usize>,
    pub notes: Vec<String>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}

impl CaseReport {
    pub fn to_doc(&self) -> CaseReportDoc {
        CaseReportDoc {
            id: self.id.clone(),
            params: self.params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            terms: self.terms,
            hankel_terms: self.hankel_terms,
            sequence: strings(&self.sequence),
            hankel: strings(&self.hankel),
            fit_status: self.fit.as_ref().map_or("skipped".to_string(), |f| {
                f.status.as_str().to_string()
            }),
            fit_solution: self.fit.as_ref().and_then(|f| f.solution.as_deref().map(strings)),
            fit_basis: self
                .fit
                .as_ref()
                .map(|f| f.basis.iter().map(|v| strings(v)).collect())
                .unwrap_or_default(),
            predicted: self.predicted.as_deref().map(strings),
            verdict: self.verdict.as_str(),
            failing_n: self.failing_n,
            notes: self.notes.clone(),
        }
    }
}

/// Serializable sweep document: all case reports plus the summary block.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SweepReportDoc {
    pub id: String,
    pub terms: usize,
    pub hankel_terms: usize,
    pub cases: Vec<CaseReportDoc>,
    pub summary: SweepSummary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_rational;

    fn binds(pairs: &[(&str, &str)]) -> BTreeMap<String, Rational> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), parse_rational(v).unwrap()))
            .collect()
    }

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn catalog_expressions_parse_and_agree() {
        // every entry: CF fixpoint == Riordan-Catalan form at sample bindings
        for def in super::CATALOG {
            let mut b = BTreeMap::new();
            for name in def.params {
                if def.id == "C5" && (*name == "u" || *name == "v") {
                    continue; // defaults keep the family unweighted
                }
                b.insert(name.to_string(), q("2"));
            }
            let b = complete_bindings(def, &b).unwrap();
            let cf = cf_series(def.id, &b, 12).unwrap();
            let rio = family_series(def.id, &b, 12).unwrap();
            assert_eq!(cf, rio, "{}", def.id);
        }
    }

    #[test]
    fn predicted_values() {
        assert_eq!(
            predicted_params("C1", &binds(&[("r", "0"), ("s", "1")])).unwrap(),
            Predicted::Params(vec![q("0"), q("4")])
        );
        assert_eq!(
            predicted_params("EX1R", &binds(&[("r", "1")])).unwrap(),
            Predicted::Params(vec![q("0"), q("4")])
        );
        // default binding r=1
        assert_eq!(
            predicted_params("EX1R", &BTreeMap::new()).unwrap(),
            Predicted::Params(vec![q("0"), q("4")])
        );
        assert_eq!(predicted_params("C7", &binds(&[("r", "3")])).unwrap(), Predicted::Pole);
        assert_eq!(predicted_params("C7", &binds(&[("r", "1")])).unwrap(), Predicted::Pole);
        assert_eq!(
            predicted_params("EX6A", &BTreeMap::new()).unwrap(),
            Predicted::Params(vec![q("-101/3"), q("-484/3"), q("4299"), q("23359/3")])
        );
        assert!(predicted_params("C1", &binds(&[("r", "0")])).is_err());
        assert!(predicted_params("C1", &binds(&[("r", "0"), ("s", "1"), ("x", "1")])).is_err());
        assert!(predicted_params("nope", &BTreeMap::new()).is_err());
    }

    #[test]
    fn run_case_confirms_the_lattice_path_family() {
        let case = ConjectureCase::new("EX1R", binds(&[("r", "1")]))
            .unwrap()
            .with_budget(21, 10);
        let report = run_case(&case).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.predicted, Some(vec![q("0"), q("4")]));
        assert_eq!(
            &report.sequence[..11],
            &[1, 1, 3, 7, 19, 51, 143, 407, 1183, 3487, 10415].map(|n| q(&n.to_string()))[..]
        );
        let fit = report.fit.as_ref().unwrap();
        assert_eq!(fit.status, SolveStatus::Unique);
        assert_eq!(fit.solution.clone().unwrap(), vec![q("0"), q("4")]);
    }

    #[test]
    fn run_case_somos6_example() {
        let case = ConjectureCase::new("C5", binds(&[("r", "-3"), ("s", "-2"), ("t", "1")]))
            .unwrap()
            .with_budget(30, 9);
        let report = run_case(&case).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert_eq!(report.predicted, Some(vec![q("1"), q("0"), q("-5")]));
        assert_eq!(
            report.hankel[..9],
            ["1", "-1", "-2", "5", "17", "-3", "-122", "1201", "-2980"].map(q)[..]
        );
        // C5 carries a permanent note about its printed general term
        assert!(!report.notes.is_empty());
    }

    #[test]
    fn run_case_at_a_pole_is_degenerate() {
        let case = ConjectureCase::new("C7", binds(&[("r", "3")]))
            .unwrap()
            .with_budget(25, 8);
        let report = run_case(&case).unwrap();
        assert_eq!(report.verdict, Verdict::Pole);
        assert!(report.predicted.is_none());
        assert!(report.fit.is_some());
    }

    #[test]
    fn run_case_weighted_family() {
        let case = ConjectureCase::new(
            "C5",
            binds(&[("r", "0"), ("s", "1"), ("t", "1"), ("u", "2"), ("v", "-1")]),
        )
        .unwrap()
        .with_budget(21, 9);
        let report = run_case(&case).unwrap();
        assert_eq!(report.verdict, Verdict::Confirmed);
        assert!(report.predicted.is_none());
        let fit = report.fit.as_ref().unwrap();
        assert_eq!(fit.solution.clone().unwrap(), vec![q("16"), q("0"), q("728")]);
    }

    #[test]
    fn run_case_validates_budget() {
        let case = ConjectureCase::new("EX1R", binds(&[("r", "1")]))
            .unwrap()
            .with_budget(10, 10);
        assert!(matches!(run_case(&case), Err(Error::InsufficientTerms { .. })));
    }

    #[test]
    fn wrong_predictions_are_refuted_with_evidence() {
        // doubling Hankel of the lattice-path family: the unique Somos-4
        // relation is (0,4); a wrong prediction must be refuted at the
        // first failing identity, with both sides recorded
        let hankel = qvec(&["1", "2", "4", "16", "64", "512", "4096"]);
        let fit = somos_fit(&hankel, 4, None).unwrap();
        let mut notes = Vec::new();
        let (verdict, failing) =
            decide(&hankel, &fit, Some(&qvec(&["1", "1"])), 4, false, &mut notes);
        assert_eq!(verdict, Verdict::RefutedAt(4));
        assert_eq!(failing, Some(4));
        assert!(notes.iter().any(|n| n.contains("fails at n=4")));

        let mut notes = Vec::new();
        let (verdict, failing) =
            decide(&hankel, &fit, Some(&qvec(&["0", "4"])), 4, false, &mut notes);
        assert_eq!(verdict, Verdict::Confirmed);
        assert_eq!(failing, None);
    }

    fn qvec(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| parse_rational(s).unwrap()).collect()
    }

    #[test]
    fn reports_are_deterministic() {
        let case = ConjectureCase::new("C5", binds(&[("r", "-3"), ("s", "0"), ("t", "-1")]))
            .unwrap()
            .with_budget(25, 8);
        let a = serde_json::to_string(&run_case(&case).unwrap().to_doc()).unwrap();
        let b = serde_json::to_string(&run_case(&case).unwrap().to_doc()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_order_and_summary() {
        let grid = BTreeMap::from([
            ("r".to_string(), vec![q("0"), q("1")]),
            ("s".to_string(), vec![q("1"), q("2")]),
        ]);
        let (reports, summary) = sweep("C1", &grid, 17, 8).unwrap();
        assert_eq!(summary.total, 4);
        assert_eq!(reports.len(), 4);
        // row-major over sorted names: r is the slow axis
        let order: Vec<(String, String)> = reports
            .iter()
            .map(|c| (c.params["r"].to_string(), c.params["s"].to_string()))
            .collect();
        assert_eq!(
            order,
            [("0", "1"), ("0", "2"), ("1", "1"), ("1", "2")]
                .map(|(a, b)| (a.to_string(), b.to_string()))
        );
        assert_eq!(summary.confirmed + summary.refuted + summary.degenerate, 4);
    }

    #[test]
    fn empty_grid_dimension_gives_no_reports() {
        let grid = BTreeMap::from([
            ("r".to_string(), vec![]),
            ("s".to_string(), vec![q("1")]),
        ]);
        let (reports, summary) = sweep("C1", &grid, 17, 8).unwrap();
        assert!(reports.is_empty());
        assert_eq!(summary.total, 0);
        assert!(sweep("C1", &BTreeMap::from([("z".to_string(), vec![])]), 17, 8).is_err());
    }
}
