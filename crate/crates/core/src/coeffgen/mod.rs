//! Exact generation of the coefficient tables behind an order-`2r-1` WENO
//! reconstruction at `x_{1/2}`.
//!
//! Every quantity is derived in [`BigRational`] arithmetic on a unit grid
//! (`x_j = j`, cell `j` spanning `[j-1/2, j+1/2]`) and lowered to `f64`
//! exactly once. For cell averages the substencil polynomial is the
//! derivative of the interpolant of the primitive function through the
//! cell interfaces; for point values it is the plain Lagrange interpolant.

mod ldl;
mod poly;
pub(crate) mod table;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use ldl::{ldl_sum_of_squares, SumOfSquares};
pub use table::{ExactTable, ReconstructionTable};

use poly::{lagrange_basis, rat, RatPoly};

/// Smallest supported order parameter.
pub const MIN_R: usize = 2;
/// Largest supported order parameter.
pub const MAX_R: usize = 8;
/// Window length at `MAX_R`.
pub const MAX_WINDOW: usize = 2 * MAX_R - 1;

/// How the stencil data samples the underlying function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiscretizationMode {
    PointValue,
    CellAverage,
}

impl fmt::Display for DiscretizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiscretizationMode::PointValue => f.write_str("point-value"),
            DiscretizationMode::CellAverage => f.write_str("cell-average"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("order parameter r = {0} outside supported range [{MIN_R}, {MAX_R}]")]
    UnsupportedOrder(usize),
    #[error("substencil index {i} out of range for r = {r}")]
    SubstencilIndex { r: usize, i: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("negative pivot at elimination step {step}")]
    NegativePivot { step: usize },
    #[error("quadratic form rank {found}, expected {expected}")]
    RankDeficient { expected: usize, found: usize },
    #[error("quadratic form has full rank; a constant kernel was expected")]
    FullRank,
    #[error("ideal weights do not exist or are not positive: {0}")]
    IdealWeights(String),
}

fn check_order(r: usize) -> Result<(), CoeffError> {
    if (MIN_R..=MAX_R).contains(&r) {
        Ok(())
    } else {
        Err(CoeffError::UnsupportedOrder(r))
    }
}

/// Basis polynomials `φ_k` of the reconstruction from `len` samples at
/// positions `first, …, first+len-1`: the reconstructed polynomial is
/// `Σ_k f_k φ_k`.
pub(crate) fn sample_basis(first: i64, len: usize, mode: DiscretizationMode) -> Vec<RatPoly> {
    match mode {
        DiscretizationMode::PointValue => {
            let nodes: Vec<_> = (0..len as i64).map(|k| rat(first + k, 1)).collect();
            lagrange_basis(&nodes)
        }
        DiscretizationMode::CellAverage => {
            // Primitive P(t) = ∫ f from the leftmost interface; P at the
            // (len+1) interfaces is a partial sum of the averages.
            let nodes: Vec<_> = (0..=len as i64)
                .map(|m| rat(2 * (first + m) - 1, 2))
                .collect();
            let dl: Vec<_> = lagrange_basis(&nodes).iter().map(RatPoly::derivative).collect();
            (0..len)
                .map(|k| dl[k + 1..].iter().fold(RatPoly::zero(), |acc, p| acc.add(p)))
                .collect()
        }
    }
}

fn substencil_basis(r: usize, i: usize, mode: DiscretizationMode) -> Vec<RatPoly> {
    sample_basis(-(r as i64) + 1 + i as i64, r, mode)
}

fn half() -> BigRational {
    rat(1, 2)
}

/// Coefficients `d[i][j]` such that `p_{r,i}(x_{1/2}) = Σ_j d[i][j] f_{-r+1+i+j}`.
pub fn substencil_coefficients(r: usize, mode: DiscretizationMode) -> Result<Vec<Vec<BigRational>>, CoeffError> {
    check_order(r)?;
    Ok((0..r)
        .map(|i| {
            substencil_basis(r, i, mode)
                .iter()
                .map(|phi| phi.eval(&half()))
                .collect()
        })
        .collect())
}

/// Coefficients of the full `(2r-1)`-point reconstruction at `x_{1/2}`.
pub fn full_stencil_coefficients(r: usize, mode: DiscretizationMode) -> Result<Vec<BigRational>, CoeffError> {
    check_order(r)?;
    Ok(sample_basis(-(r as i64) + 1, 2 * r - 1, mode)
        .iter()
        .map(|phi| phi.eval(&half()))
        .collect())
}

/// Ideal linear weights: `Σ_i c_i d[i][·]` must equal the full-stencil
/// coefficients. The system is lower triangular in the leftmost window
/// positions; the remaining `r-1` equations are checked afterwards.
pub fn ideal_weights(
    substencil: &[Vec<BigRational>],
    full: &[BigRational],
) -> Result<Vec<BigRational>, CoeffError> {
    let r = substencil.len();
    let mut c: Vec<BigRational> = Vec::with_capacity(r);
    for k in 0..r {
        let mut rhs = full[k].clone();
        for (i, ci) in c.iter().enumerate() {
            rhs -= ci * &substencil[i][k - i];
        }
        let lead = &substencil[k][0];
        if lead.is_zero() {
            return Err(CoeffError::IdealWeights(format!("zero leading coefficient in substencil {k}")));
        }
        c.push(rhs / lead);
    }
    for (pos, target) in full.iter().enumerate() {
        let mut acc = BigRational::zero();
        for (i, ci) in c.iter().enumerate() {
            if pos >= i && pos - i < r {
                acc += ci * &substencil[i][pos - i];
            }
        }
        if &acc != target {
            return Err(CoeffError::IdealWeights(format!("inconsistent at window position {pos}")));
        }
    }
    if c.iter().any(|ci| !ci.is_positive()) {
        return Err(CoeffError::IdealWeights("non-positive weight".into()));
    }
    Ok(c)
}

/// `b[t] = (-1)^t · binomial(2r-2, t)` for window position `t = j + r - 1`.
pub fn undivided_difference_coefficients(r: usize) -> Result<Vec<BigRational>, CoeffError> {
    check_order(r)?;
    let n = 2 * r - 2;
    let mut out = Vec::with_capacity(n + 1);
    let mut binom = BigInt::one();
    for t in 0..=n {
        let signed = if t % 2 == 0 { binom.clone() } else { -binom.clone() };
        out.push(BigRational::from_integer(signed));
        binom = binom * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    Ok(out)
}

/// Matrix `A_i` of the Jiang-Shu indicator of substencil `i`:
/// `xᵀ A_i x = Σ_{k=1}^{r-1} ∫_{-1/2}^{1/2} (p_{r,i}^{(k)})² dξ` on the unit
/// grid, which is the `h`-scaled integral with `h` cancelled.
pub fn js_quadratic_form(r: usize, i: usize, mode: DiscretizationMode) -> Result<Vec<Vec<BigRational>>, CoeffError> {
    check_order(r)?;
    if i >= r {
        return Err(CoeffError::SubstencilIndex { r, i });
    }
    let mut derivs: Vec<RatPoly> = substencil_basis(r, i, mode);
    let mut a = vec![vec![BigRational::zero(); r]; r];
    let (lo, hi) = (rat(-1, 2), half());
    for _ in 1..r {
        derivs = derivs.iter().map(RatPoly::derivative).collect();
        for k in 0..r {
            for l in k..r {
                let v = derivs[k].mul(&derivs[l]).integrate(&lo, &hi);
                a[k][l] += &v;
                if l != k {
                    a[l][k] += v;
                }
            }
        }
    }
    Ok(a)
}

/// Derive the complete exact table and lower it to `f64`.
pub fn generate_table(r: usize, mode: DiscretizationMode) -> Result<ReconstructionTable, CoeffError> {
    check_order(r)?;
    let substencil = substencil_coefficients(r, mode)?;
    let full = full_stencil_coefficients(r, mode)?;
    let ideal = ideal_weights(&substencil, &full)?;
    let undivided = undivided_difference_coefficients(r)?;
    let js_forms = (0..r)
        .map(|i| js_quadratic_form(r, i, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let js_sos = js_forms
        .iter()
        .map(|a| ldl_sum_of_squares(a))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = ExactTable {
        r,
        mode,
        substencil,
        ideal,
        undivided,
        js_forms,
        js_sos,
    };
    Ok(ReconstructionTable::lower(exact))
}

type Cache = Mutex<HashMap<(usize, DiscretizationMode), Arc<ReconstructionTable>>>;

/// Process-wide table cache; each `(r, mode)` is generated once.
pub fn cached_table(r: usize, mode: DiscretizationMode) -> Result<Arc<ReconstructionTable>, CoeffError> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("table cache poisoned").get(&(r, mode)) {
        return Ok(Arc::clone(t));
    }
    let table = Arc::new(generate_table(r, mode)?);
    let mut guard = cache.lock().expect("table cache poisoned");
    Ok(Arc::clone(guard.entry((r, mode)).or_insert(table)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn rejects_out_of_range_order() {
        assert_eq!(generate_table(1, DiscretizationMode::CellAverage).unwrap_err(), CoeffError::UnsupportedOrder(1));
        assert_eq!(generate_table(9, DiscretizationMode::PointValue).unwrap_err(), CoeffError::UnsupportedOrder(9));
        assert!(js_quadratic_form(3, 3, DiscretizationMode::PointValue).is_err());
    }

    #[test]
    fn weno3_cell_average_substencils() {
        let d = substencil_coefficients(2, DiscretizationMode::CellAverage).unwrap();
        assert_eq!(d[0], rats(&[(-1, 2), (3, 2)]));
        assert_eq!(d[1], rats(&[(1, 2), (1, 2)]));
    }

    #[test]
    fn weno5_cell_average_weights_and_rows() {
        let d = substencil_coefficients(3, DiscretizationMode::CellAverage).unwrap();
        assert_eq!(d[0], rats(&[(1, 3), (-7, 6), (11, 6)]));
        assert_eq!(d[1], rats(&[(-1, 6), (5, 6), (1, 3)]));
        assert_eq!(d[2], rats(&[(1, 3), (5, 6), (-1, 6)]));
        let full = full_stencil_coefficients(3, DiscretizationMode::CellAverage).unwrap();
        assert_eq!(full, rats(&[(2, 60), (-13, 60), (47, 60), (27, 60), (-3, 60)]));
        let c = ideal_weights(&d, &full).unwrap();
        assert_eq!(c, rats(&[(1, 10), (6, 10), (3, 10)]));
    }

    #[test]
    fn weno5_point_value_weights() {
        let d = substencil_coefficients(3, DiscretizationMode::PointValue).unwrap();
        let full = full_stencil_coefficients(3, DiscretizationMode::PointValue).unwrap();
        let c = ideal_weights(&d, &full).unwrap();
        assert_eq!(c, rats(&[(1, 16), (10, 16), (5, 16)]));
    }

    #[test]
    fn binomial_undivided_differences() {
        assert_eq!(
            undivided_difference_coefficients(3).unwrap(),
            rats(&[(1, 1), (-4, 1), (6, 1), (-4, 1), (1, 1)])
        );
        assert_eq!(undivided_difference_coefficients(2).unwrap(), rats(&[(1, 1), (-2, 1), (1, 1)]));
    }

    #[test]
    fn jiang_shu_weno3_form_is_a_single_difference_square() {
        for mode in [DiscretizationMode::CellAverage, DiscretizationMode::PointValue] {
            let a = js_quadratic_form(2, 0, mode).unwrap();
            assert_eq!(a, vec![rats(&[(1, 1), (-1, 1)]), rats(&[(-1, 1), (1, 1)])]);
        }
    }

    #[test]
    fn cache_returns_shared_table() {
        let a = cached_table(4, DiscretizationMode::CellAverage).unwrap();
        let b = cached_table(4, DiscretizationMode::CellAverage).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
