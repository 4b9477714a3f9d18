//! Pivoted LDLᵀ factorization of rank-deficient PSD forms, exact arithmetic.
//!
//! A symmetric positive semi-definite `n×n` matrix `A` of rank `n-1` is
//! written as `P A Pᵀ = L D Lᵀ` with `L` unit lower triangular and
//! `D = diag(β_0, …, β_{n-2}, 0)`. With `y = P x`, i.e. `y_k = x_{perm[k]}`,
//!
//! ```text
//! xᵀ A x = Σ_j β_j ( Σ_{k ≥ j} L[k][j] · y_k )²
//! ```
//!
//! Pivots are chosen as the largest remaining diagonal entry.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::CoeffError;

/// Sum-of-squares factors of one quadratic form.
#[derive(Clone, Debug, PartialEq)]
pub struct SumOfSquares<T> {
    /// `perm[k]` is the substencil position feeding `y_k`.
    pub perm: Vec<usize>,
    /// Positive pivots, one per square (`n - 1` of them).
    pub beta: Vec<T>,
    /// Unit lower-triangular factor, row-major `n×n`.
    pub lower: Vec<Vec<T>>,
}

impl<T> SumOfSquares<T> {
    pub fn size(&self) -> usize {
        self.perm.len()
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> SumOfSquares<U> {
        SumOfSquares {
            perm: self.perm.clone(),
            beta: self.beta.iter().map(&mut f).collect(),
            lower: self
                .lower
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
        }
    }
}

impl SumOfSquares<BigRational> {
    /// Rebuild the symmetric matrix `Pᵀ L D Lᵀ P`.
    pub fn reassemble(&self) -> Vec<Vec<BigRational>> {
        let n = self.size();
        let mut a = vec![vec![BigRational::zero(); n]; n];
        for (j, beta) in self.beta.iter().enumerate() {
            for k in j..n {
                for l in j..n {
                    let v = beta * &self.lower[k][j] * &self.lower[l][j];
                    a[self.perm[k]][self.perm[l]] += v;
                }
            }
        }
        a
    }

    /// Evaluate the form at `x` through the squares.
    pub fn evaluate(&self, x: &[BigRational]) -> BigRational {
        let n = self.size();
        let mut total = BigRational::zero();
        for (j, beta) in self.beta.iter().enumerate() {
            let mut acc = BigRational::zero();
            for k in j..n {
                acc += &self.lower[k][j] * &x[self.perm[k]];
            }
            total += beta * &acc * &acc;
        }
        total
    }
}

/// Factor a symmetric PSD rational matrix of rank `n-1` into squares.
pub fn ldl_sum_of_squares(a: &[Vec<BigRational>]) -> Result<SumOfSquares<BigRational>, CoeffError> {
    let n = a.len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(CoeffError::NotSquare);
    }
    for i in 0..n {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(CoeffError::NotSymmetric);
            }
        }
    }

    let mut work: Vec<Vec<BigRational>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut lower = vec![vec![BigRational::zero(); n]; n];
    let mut beta = Vec::with_capacity(n.saturating_sub(1));

    for k in 0..n {
        // Largest remaining diagonal entry; ties keep the earliest index.
        let mut p = k;
        for m in k + 1..n {
            if work[m][m] > work[p][p] {
                p = m;
            }
        }
        if p != k {
            work.swap(k, p);
            for row in work.iter_mut() {
                row.swap(k, p);
            }
            perm.swap(k, p);
            lower.swap(k, p);
            for row in lower.iter_mut() {
                row.swap(k, p);
            }
        }

        let pivot = work[k][k].clone();
        if pivot.is_negative() {
            return Err(CoeffError::NegativePivot { step: k });
        }
        lower[k][k] = BigRational::from_integer(1.into());
        if pivot.is_zero() {
            // PSD with a zero max diagonal: the remaining block must vanish.
            if k != n - 1 {
                return Err(CoeffError::RankDeficient { expected: n - 1, found: k });
            }
            if work[k].iter().skip(k).any(|v| !v.is_zero()) {
                return Err(CoeffError::NegativePivot { step: k });
            }
            break;
        }
        if k == n - 1 {
            return Err(CoeffError::FullRank);
        }

        for m in k + 1..n {
            lower[m][k] = &work[m][k] / &pivot;
        }
        for m in k + 1..n {
            for l in k + 1..n {
                let update = &lower[m][k] * &work[k][l];
                work[m][l] -= update;
            }
        }
        for m in k..n {
            work[m][k] = BigRational::zero();
            work[k][m] = BigRational::zero();
        }
        beta.push(pivot);
    }

    Ok(SumOfSquares { perm, beta, lower })
}
