//! Verification and exact fitting of Somos-k bilinear recurrences, k in
//! {4, 6, 8}.
//!
//! Everything is checked in cross-multiplied form
//! `a_n * a_{n-k} = sum_i c_i * a_{n-i} * a_{n-k+i}` (last term squared), so
//! zero terms need no special casing and no division ever happens.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{exact_solve, AffineSolutionSet, Matrix, Rational, SolveStatus};

/// A Somos-k relation: order k, one coefficient per bilinear term (k/2 of
/// them), and a mask telling which positions are constrained to zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SomosRelation {
    order: usize,
    coeffs: Vec<Rational>,
    mask: Vec<bool>,
}

/// `true` marks a free position; `false` pins that coefficient to zero.
pub fn full_mask(order: usize) -> Vec<bool> {
    vec![true; order / 2]
}

impl SomosRelation {
    pub fn new(order: usize, coeffs: Vec<Rational>) -> Result<Self> {
        let mask = coeffs.iter().map(|c| !c.is_zero()).collect();
        Self::with_mask(order, coeffs, mask)
    }

    pub fn with_mask(order: usize, coeffs: Vec<Rational>, mask: Vec<bool>) -> Result<Self> {
        if !matches!(order, 4 | 6 | 8) {
            return Err(Error::BadSomosOrder(order));
        }
        if coeffs.len() != order / 2 || mask.len() != order / 2 {
            return Err(Error::Invalid(format!(
                "Somos {order} needs {} coefficients, got {}",
                order / 2,
                coeffs.len()
            )));
        }
        if coeffs.iter().zip(&mask).any(|(c, &free)| !free && !c.is_zero()) {
            return Err(Error::Invalid("masked positions must hold zero".to_string()));
        }
        Ok(SomosRelation { order, coeffs, mask })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }
}

/// One failed bilinear identity, with both exact sides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckFailure {
    pub n: usize,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// Outcome of checking a relation against a sequence prefix: which indices
/// were checkable and every failure among them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub order: usize,
    pub checked: usize,
    pub failures: Vec<CheckFailure>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failing(&self) -> Option<usize> {
        self.failures.first().map(|f| f.n)
    }
}

/// The window products `a_{n-i} * a_{n-k+i}` for i = 1..k/2.
fn window(seq: &[Rational], n: usize, k: usize) -> Vec<Rational> {
    (1..=k / 2).map(|i| &seq[n - i] * &seq[n - k + i]).collect()
}

/// Check the cross-multiplied identity at every n from k to the end of the
/// prefix. Failures are reported, never raised.
pub fn somos_check(seq: &[Rational], rel: &SomosRelation) -> CheckReport {
    let k = rel.order;
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in k..seq.len() {
        let lhs = &seq[n] * &seq[n - k];
        let rhs = window(seq, n, k)
            .iter()
            .zip(&rel.coeffs)
            .fold(Rational::zero(), |acc, (w, c)| acc + w * c);
        checked += 1;
        if lhs != rhs {
            failures.push(CheckFailure { n, lhs, rhs });
        }
    }
    CheckReport { order: k, checked, failures }
}

/// Result of an exact fit: the affine set of coefficient tuples consistent
/// with every buildable row, embedded back into full (masked) coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FitResult {
    pub order: usize,
    pub mask: Vec<bool>,
    pub status: SolveStatus,
    /// Particular solution in full coordinates (masked positions zero).
    pub solution: Option<Vec<Rational>>,
    /// Homogeneous basis in full coordinates.
    pub basis: Vec<Vec<Rational>>,
    /// Last n whose identity was re-verified against the solution.
    pub verified_to: Option<usize>,
    /// Smallest n at which the rows first become inconsistent.
    pub first_failing: Option<usize>,
    pub rows: usize,
    /// Rows that actually constrain the coefficients (not 0 = 0).
    pub nontrivial_rows: usize,
}

impl FitResult {
    /// Exact membership of a full coefficient tuple in the solution set.
    pub fn contains(&self, candidate: &[Rational]) -> bool {
        if candidate.len() != self.mask.len() {
            return false;
        }
        if candidate.iter().zip(&self.mask).any(|(c, &free)| !free && !c.is_zero()) {
            return false;
        }
        let Some(solution) = &self.solution else { return false };
        let set = AffineSolutionSet {
            status: self.status,
            particular: Some(solution.clone()),
            basis: self.basis.clone(),
        };
        set.contains(candidate)
    }
}

/// Membership test, spelled as a free function for pipeline call sites.
pub fn membership(fit: &FitResult, candidate: &[Rational]) -> bool {
    fit.contains(candidate)
}

/// Fit Somos-k coefficients to a sequence prefix by exact linear algebra.
///
/// One linear row per checkable n; masked positions are removed from the
/// unknowns. All rows participate: rank decides between a unique solution,
/// an affine set, or inconsistency (reported with the smallest breaking n).
pub fn somos_fit(seq: &[Rational], order: usize, mask: Option<&[bool]>) -> Result<FitResult> {
    if !matches!(order, 4 | 6 | 8) {
        return Err(Error::BadSomosOrder(order));
    }
    let k = order;
    let h = k / 2;
    let mask: Vec<bool> = match mask {
        Some(m) => {
            if m.len() != h {
                return Err(Error::Invalid(format!("mask must have {h} entries")));
            }
            m.to_vec()
        }
        None => full_mask(k),
    };
    if seq.len() < k + 1 {
        return Err(Error::InsufficientTerms { needed: k + 1, got: seq.len() });
    }
    let free: Vec<usize> = (0..h).filter(|&i| mask[i]).collect();
    if free.is_empty() {
        return Err(Error::Invalid("mask leaves no free coefficient".to_string()));
    }

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let mut row_ns: Vec<usize> = Vec::new();
    let mut nontrivial = 0;
    for n in k..seq.len() {
        let w = window(seq, n, k);
        let row: Vec<Rational> = free.iter().map(|&i| w[i].clone()).collect();
        let b = &seq[n] * &seq[n - k];
        if row.iter().any(|c| !c.is_zero()) || !b.is_zero() {
            nontrivial += 1;
        }
        rows.push(row);
        rhs.push(b);
        row_ns.push(n);
    }

    let a = Matrix::from_rows(rows.clone())?;
    let sol = exact_solve(&a, &rhs)?;

    let embed = |v: &[Rational]| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); h];
        for (slot, &i) in free.iter().enumerate() {
            out[i] = v[slot].clone();
        }
        out
    };

    match sol.status {
        SolveStatus::Inconsistent => {
            // find the shortest prefix of rows that is already inconsistent
            let mut first_failing = None;
            for upto in 1..=rows.len() {
                let a = Matrix::from_rows(rows[..upto].to_vec())?;
                if exact_solve(&a, &rhs[..upto])?.status == SolveStatus::Inconsistent {
                    first_failing = Some(row_ns[upto - 1]);
                    break;
                }
            }
            Ok(FitResult {
                order: k,
                mask,
                status: SolveStatus::Inconsistent,
                solution: None,
                basis: Vec::new(),
                verified_to: None,
                first_failing,
                rows: rows.len(),
                nontrivial_rows: nontrivial,
            })
        }
        status => {
            let solution = embed(sol.particular.as_ref().expect("consistent"));
            let basis: Vec<Vec<Rational>> = sol.basis.iter().map(|v| embed(v)).collect();
            // a consistent solve satisfies every row; re-assert independently
            let rel = SomosRelation::with_mask(k, solution.clone(), mask.clone())?;
            let report = somos_check(seq, &rel);
            debug_assert!(report.passed(), "fit solution must satisfy every row");
            Ok(FitResult {
                order: k,
                mask,
                status,
                solution: Some(solution),
                basis,
                verified_to: report.passed().then(|| seq.len() - 1),
                first_failing: None,
                rows: rows.len(),
                nontrivial_rows: nontrivial,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().copied().map(q).collect()
    }

    #[test]
    fn doubling_hankel_is_a_0_4_somos4() {
        let seq = qs(&[1, 2, 4, 16, 64, 512, 4096]);
        let rel = SomosRelation::new(4, qs(&[0, 4])).unwrap();
        let report = somos_check(&seq, &rel);
        assert!(report.passed());
        assert_eq!(report.checked, 3);
    }

    #[test]
    fn somos6_hand_checked_identity() {
        // n=6: 9*(-1987)*3 + 23*(-23)^2 = -41482 = a_6 * a_0
        let seq = qs(&[1, 3, 2, -23, -231, -1987, -41482]);
        let rel = SomosRelation::new(6, qs(&[9, 0, 23])).unwrap();
        let report = somos_check(&seq, &rel);
        assert!(report.passed());
    }

    #[test]
    fn all_ones_fails_a_1_1_somos4() {
        let seq = qs(&[1; 8]);
        let rel = SomosRelation::new(4, qs(&[1, 1])).unwrap();
        let report = somos_check(&seq, &rel);
        assert_eq!(report.failures.len(), report.checked);
        assert_eq!(report.failures[0], CheckFailure { n: 4, lhs: q(1), rhs: q(2) });
    }

    #[test]
    fn fit_recovers_0_4() {
        let seq = qs(&[1, 2, 4, 16, 64, 512, 4096]);
        let fit = somos_fit(&seq, 4, None).unwrap();
        assert_eq!(fit.status, SolveStatus::Unique);
        assert_eq!(fit.solution.clone().unwrap(), qs(&[0, 4]));
        assert_eq!(fit.verified_to, Some(6));
        assert!(fit.contains(&qs(&[0, 4])));
        assert!(!fit.contains(&qs(&[1, 2])));
    }

    #[test]
    fn fit_on_constant_sequence_is_underdetermined() {
        let seq = qs(&[1; 9]);
        let fit = somos_fit(&seq, 4, None).unwrap();
        assert_eq!(fit.status, SolveStatus::Underdetermined);
        // the affine line alpha + beta = 1
        assert!(fit.contains(&qs(&[1, 0])));
        assert!(fit.contains(&qs(&[0, 1])));
        assert!(fit.contains(&[
            Rational::new(1.into(), 2.into()),
            Rational::new(1.into(), 2.into())
        ]));
        assert!(!fit.contains(&qs(&[0, 4])));
    }

    #[test]
    fn masked_fit_pins_zeros() {
        let seq = qs(&[1, 3, 2, -23, -231, -1987, -41482, 160209, 28822312]);
        let fit = somos_fit(&seq, 6, Some(&[true, false, true])).unwrap();
        assert_eq!(fit.status, SolveStatus::Unique);
        assert_eq!(fit.solution.clone().unwrap(), qs(&[9, 0, 23]));
        // candidates with a nonzero masked coordinate are outside the set
        assert!(!fit.contains(&qs(&[9, 1, 23])));
    }

    #[test]
    fn inconsistent_fit_reports_first_failing_n() {
        // starts as a (0,4) Somos-4, then breaks at the last entry
        let seq = qs(&[1, 2, 4, 16, 64, 512, 4096, 999]);
        let fit = somos_fit(&seq, 4, None).unwrap();
        assert_eq!(fit.status, SolveStatus::Inconsistent);
        assert_eq!(fit.first_failing, Some(7));
        assert!(fit.solution.is_none());
    }

    #[test]
    fn too_short_to_fit() {
        assert_eq!(
            somos_fit(&qs(&[1, 1, 1, 1]), 4, None),
            Err(Error::InsufficientTerms { needed: 5, got: 4 })
        );
        assert!(somos_fit(&qs(&[1; 9]), 5, None).is_err());
        assert!(somos_fit(&qs(&[1; 9]), 4, Some(&[false, false])).is_err());
    }

    #[test]
    fn relation_validation() {
        assert!(SomosRelation::new(5, qs(&[1, 1])).is_err());
        assert!(SomosRelation::new(4, qs(&[1, 1, 1])).is_err());
        assert!(SomosRelation::with_mask(4, qs(&[1, 1]), vec![true, false]).is_err());
    }

    #[test]
    fn shift_robustness() {
        // every contiguous window of a verified sequence passes with the
        // same coefficients
        let seq = qs(&[1, 2, 4, 16, 64, 512, 4096, 65536, 1048576]);
        let rel = SomosRelation::new(4, qs(&[0, 4])).unwrap();
        for start in 0..seq.len() - 5 {
            for end in start + 5..=seq.len() {
                let report = somos_check(&seq[start..end], &rel);
                assert!(report.passed(), "window {start}..{end}");
            }
        }
    }

    #[test]
    fn somos4_sequence_admits_somos8_relations() {
        // a true Somos-4 sequence gives an underdetermined (never
        // inconsistent) Somos-8 fit
        let seq = qs(&[
            1, 2, 4, 16, 64, 512, 4096, 65536, 1048576, 33554432, 1073741824,
        ]);
        let fit = somos_fit(&seq, 8, None).unwrap();
        assert_eq!(fit.status, SolveStatus::Underdetermined);
    }
}
