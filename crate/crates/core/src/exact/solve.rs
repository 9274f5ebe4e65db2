//! Exact rational linear solver returning full affine solution sets.

use num_traits::{One, Zero};

use super::{Matrix, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveStatus {
    Unique,
    Underdetermined,
    Inconsistent,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Unique => "unique",
            SolveStatus::Underdetermined => "underdetermined",
            SolveStatus::Inconsistent => "inconsistent",
        }
    }
}

/// The solution set of `A x = b`: empty, a point, or an affine subspace given
/// by one particular solution plus a basis of the homogeneous space.
///
/// Underdetermination is a first-class outcome, not an error: short data
/// prefixes legitimately fail to pin coefficients down.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSolutionSet {
    pub status: SolveStatus,
    pub particular: Option<Vec<Rational>>,
    pub basis: Vec<Vec<Rational>>,
}

impl AffineSolutionSet {
    /// Exact membership test.
    pub fn contains(&self, candidate: &[Rational]) -> bool {
        let Some(part) = &self.particular else {
            return false;
        };
        if candidate.len() != part.len() {
            return false;
        }
        let diff: Vec<Rational> = candidate.iter().zip(part).map(|(c, p)| c - p).collect();
        if self.basis.is_empty() {
            return diff.iter().all(Zero::is_zero);
        }
        // solve basis * lambda = diff
        let n = part.len();
        let a = Matrix::from_fn(n, self.basis.len(), |i, j| self.basis[j][i].clone());
        match exact_solve(&a, &diff) {
            Ok(sol) => sol.status != SolveStatus::Inconsistent,
            Err(_) => false,
        }
    }
}

/// Solve `A x = b` by exact Gaussian elimination with nonzero-pivot selection.
pub fn exact_solve(a: &Matrix<Rational>, b: &[Rational]) -> Result<AffineSolutionSet> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch);
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Invalid("empty system".to_string()));
    }
    let m = a.rows();
    let n = a.cols();
    // augmented matrix, reduced to RREF
    let mut aug = Matrix::from_fn(m, n + 1, |i, j| {
        if j < n {
            a.at(i, j).clone()
        } else {
            b[i].clone()
        }
    });

    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&r| !aug.at(r, col).is_zero()) else {
            continue;
        };
        aug.swap_rows(row, pr);
        let inv = aug.at(row, col).recip();
        for j in col..=n {
            let v = aug.at(row, j) * &inv;
            *aug.at_mut(row, j) = v;
        }
        for r in 0..m {
            if r != row && !aug.at(r, col).is_zero() {
                let f = aug.at(r, col).clone();
                for j in col..=n {
                    let v = aug.at(r, j) - &f * aug.at(row, j);
                    *aug.at_mut(r, j) = v;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m {
            break;
        }
    }

    for r in row..m {
        if !aug.at(r, n).is_zero() {
            return Ok(AffineSolutionSet {
                status: SolveStatus::Inconsistent,
                particular: None,
                basis: Vec::new(),
            });
        }
    }

    let mut particular = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = aug.at(i, n).clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); n];
            v[fc] = Rational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -aug.at(i, fc).clone();
            }
            v
        })
        .collect();

    Ok(AffineSolutionSet {
        status: if basis.is_empty() {
            SolveStatus::Unique
        } else {
            SolveStatus::Underdetermined
        },
        particular: Some(particular),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn solve(rows: Vec<Vec<i64>>, rhs: Vec<i64>) -> AffineSolutionSet {
        let a = Matrix::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect(),
        )
        .unwrap();
        let b: Vec<Rational> = rhs.into_iter().map(q).collect();
        exact_solve(&a, &b).unwrap()
    }

    #[test]
    fn one_by_one() {
        let s = solve(vec![vec![1]], vec![5]);
        assert_eq!(s.status, SolveStatus::Unique);
        assert_eq!(s.particular.unwrap(), vec![q(5)]);
    }

    #[test]
    fn affine_line() {
        // x + y = 1 -> (1,0) + span{(1,-1)} (basis normalized on the free column)
        let s = solve(vec![vec![1, 1]], vec![1]);
        assert_eq!(s.status, SolveStatus::Underdetermined);
        assert_eq!(s.particular.clone().unwrap(), vec![q(1), q(0)]);
        assert_eq!(s.basis, vec![vec![q(-1), q(1)]]);
        assert!(s.contains(&[q(1), q(0)]));
        assert!(s.contains(&[q(0), q(1)]));
        assert!(s.contains(&[Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into())]));
        assert!(!s.contains(&[q(0), q(4)]));
    }

    #[test]
    fn somos4_fit_system_of_the_doubling_hankel() {
        // rows 2a+b=4, a+b=4, 2a+b=4 eliminate to the unique point (0,4)
        let s = solve(vec![vec![2, 1], vec![1, 1], vec![2, 1]], vec![4, 4, 4]);
        assert_eq!(s.status, SolveStatus::Unique);
        assert_eq!(s.particular.unwrap(), vec![q(0), q(4)]);
    }

    #[test]
    fn inconsistent_system() {
        let s = solve(vec![vec![1, 1], vec![1, 1]], vec![1, 2]);
        assert_eq!(s.status, SolveStatus::Inconsistent);
        assert!(s.particular.is_none());
        assert!(!s.contains(&[q(1), q(0)]));
    }

    #[test]
    fn empty_system_is_rejected() {
        let a = Matrix::<Rational>::from_rows(vec![]).unwrap();
        assert!(exact_solve(&a, &[]).is_err());
    }

    proptest! {
        /// Substituting any returned solution into A*x reproduces b exactly,
        /// and every homogeneous basis vector maps to zero.
        #[test]
        fn solutions_substitute_back(
            entries in proptest::collection::vec(-6i64..7, 12),
            rhs in proptest::collection::vec(-6i64..7, 3),
        ) {
            let a = Matrix::from_fn(3, 4, |i, j| q(entries[i * 4 + j]));
            let b: Vec<Rational> = rhs.into_iter().map(q).collect();
            let s = exact_solve(&a, &b).unwrap();
            if let Some(part) = &s.particular {
                prop_assert_eq!(a.apply_vec(part).unwrap(), b.clone());
                prop_assert!(s.contains(part));
                for v in &s.basis {
                    let img = a.apply_vec(v).unwrap();
                    prop_assert!(img.iter().all(Zero::is_zero));
                    let shifted: Vec<Rational> =
                        part.iter().zip(v).map(|(p, h)| p + h).collect();
                    prop_assert!(s.contains(&shifted));
                }
            }
        }
    }
}
