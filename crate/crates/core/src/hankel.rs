//! Hankel matrices, fraction-free determinants and the sequence Hankel
//! transform, over integers, rationals or polynomial rings.

use std::collections::BTreeMap;

use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{rat_pow, Matrix, Rational, Ring};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Each elimination step replaces an entry by a 2x2 determinant and divides
/// by the previous pivot; over an integral domain that division is exact, so
/// intermediate entries stay in the ring and grow only polynomially. Pivoting
/// takes the first nonzero entry in column order, swapping rows with sign
/// tracking; an all-zero pivot column short-circuits to zero. The 0x0 matrix
/// has determinant 1.
pub fn bareiss_det<T: Ring>(m: &Matrix<T>) -> Result<T> {
    if !m.is_square() {
        return Err(Error::NonSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(T::one());
    }
    let mut w = m.clone();
    let mut negated = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if w.at(k, k).is_zero() {
            match (k + 1..n).find(|&r| !w.at(r, k).is_zero()) {
                Some(r) => {
                    w.swap_rows(k, r);
                    negated = !negated;
                }
                None => return Ok(T::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = w.at(i, j).mul_ref(w.at(k, k)).sub_ref(&w.at(i, k).mul_ref(w.at(k, j)));
                let q = num.exact_div(&prev).expect("Bareiss division is exact");
                *w.at_mut(i, j) = q;
            }
            *w.at_mut(i, k) = T::zero();
        }
        prev = w.at(k, k).clone();
    }
    let det = w.at(n - 1, n - 1).clone();
    Ok(if negated { -det } else { det })
}

/// The Hankel matrix `(seq[i+j])` of size `(n+1) x (n+1)`.
pub fn hankel_matrix<T: Ring>(seq: &[T], n: usize) -> Result<Matrix<T>> {
    if seq.len() < 2 * n + 1 {
        return Err(Error::InsufficientTerms { needed: 2 * n + 1, got: seq.len() });
    }
    Ok(Matrix::from_fn(n + 1, n + 1, |i, j| seq[i + j].clone()))
}

/// Sequence Hankel transform: `h_n = det (seq[i+j])_{0<=i,j<=n}` for
/// `n = 0..=m`, so `h_0 = seq[0]`. Needs `2m+1` terms.
pub fn hankel_transform<T: Ring>(seq: &[T], m: usize) -> Result<Vec<T>> {
    if seq.len() < 2 * m + 1 {
        return Err(Error::InsufficientTerms { needed: 2 * m + 1, got: seq.len() });
    }
    (0..=m).map(|n| bareiss_det(&hankel_matrix(seq, n)?)).collect()
}

/// Closed-form Hankel values for the families where one is known.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HankelFormula {
    /// `h_n = s^floor(n^2/4) * (r+s+1)^floor((n+1)^2/4)`
    Conj1Powers,
    /// `h_n = 2^floor((n+1)^2/4)`
    Ex1Powers,
}

impl HankelFormula {
    pub fn from_id(id: &str) -> Result<Self> {
        match id {
            "conj1_powers" => Ok(HankelFormula::Conj1Powers),
            "ex1_powers" => Ok(HankelFormula::Ex1Powers),
            other => Err(Error::UnknownId(other.to_string())),
        }
    }
}

/// Evaluate a closed-form Hankel prediction for `n = 0..=m` (0^0 = 1).
pub fn predicted_hankel(
    formula: HankelFormula,
    params: &BTreeMap<String, Rational>,
    m: usize,
) -> Result<Vec<Rational>> {
    let get = |name: &str| -> Result<Rational> {
        params.get(name).cloned().ok_or_else(|| Error::MissingBinding(name.to_string()))
    };
    match formula {
        HankelFormula::Ex1Powers => {
            let two = Rational::from_integer(2.into());
            Ok((0..=m).map(|n| rat_pow(&two, (n + 1) * (n + 1) / 4)).collect())
        }
        HankelFormula::Conj1Powers => {
            let s = get("s")?;
            let r = get("r")?;
            let base = &r + &s + Rational::one();
            Ok((0..=m)
                .map(|n| rat_pow(&s, n * n / 4) * rat_pow(&base, (n + 1) * (n + 1) / 4))
                .collect())
        }
    }
}
