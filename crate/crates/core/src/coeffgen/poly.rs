//! Dense univariate polynomials over exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficients in ascending powers; trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatPoly(Vec<BigRational>);

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = RatPoly(vec![c]);
        p.trim();
        p
    }

    /// `x - root`
    pub fn linear_root(root: &BigRational) -> Self {
        RatPoly(vec![-root.clone(), BigRational::one()])
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    #[cfg(test)]
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            let b = other.0.get(k).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        let mut p = RatPoly(out);
        p.trim();
        p
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = RatPoly(out);
        p.trim();
        p
    }

    pub fn scale(&self, s: &BigRational) -> RatPoly {
        let mut p = RatPoly(self.0.iter().map(|c| c * s).collect());
        p.trim();
        p
    }

    pub fn derivative(&self) -> RatPoly {
        let mut p = RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        );
        p.trim();
        p
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Exact definite integral over `[a, b]`.
    pub fn integrate(&self, a: &BigRational, b: &BigRational) -> BigRational {
        let anti = RatPoly(
            std::iter::once(BigRational::zero())
                .chain(
                    self.0
                        .iter()
                        .enumerate()
                        .map(|(k, c)| c / BigRational::from_integer(BigInt::from(k + 1))),
                )
                .collect(),
        );
        anti.eval(b) - anti.eval(a)
    }
}

/// Lagrange cardinal polynomials for distinct `nodes`.
pub(crate) fn lagrange_basis(nodes: &[BigRational]) -> Vec<RatPoly> {
    (0..nodes.len())
        .map(|k| {
            let mut p = RatPoly::constant(BigRational::one());
            let mut denom = BigRational::one();
            for (m, xm) in nodes.iter().enumerate() {
                if m != k {
                    p = p.mul(&RatPoly::linear_root(xm));
                    denom *= &nodes[k] - xm;
                }
            }
            p.scale(&denom.recip())
        })
        .collect()
}
