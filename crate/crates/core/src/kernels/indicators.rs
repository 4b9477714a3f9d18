use super::{check_table, with_order, KernelError, Lanes, Real, StencilWindow};
use crate::coeffgen::table::Packed;
use crate::coeffgen::{ReconstructionTable, MAX_WINDOW};

/// `I_i = Σ_{j=1}^{r-1} (f_{-r+i+j+1} - f_{-r+i+j})²` via the squared first
/// differences `θ` and the sliding recurrence `I_i = I_{i-1} - θ_i + θ_{i+r-1}`.
/// Cost: `5r-6` additions, `2r-2` multiplications.
#[inline(always)]
pub(crate) fn fast_r<S: Real, const R: usize>(w: &[S]) -> [S; R] {
    let w = &w[..2 * R - 1];
    let mut theta = [S::constant(0.0); MAX_WINDOW];
    for j in 0..2 * R - 2 {
        let d = w[j + 1] - w[j];
        theta[j] = d * d;
    }
    let mut out = [S::constant(0.0); R];
    let mut acc = theta[0];
    for t in theta.iter().take(R - 1).skip(1) {
        acc = acc + *t;
    }
    out[0] = acc;
    for i in 1..R {
        acc = acc - theta[i - 1] + theta[i + R - 2];
        out[i] = non_negative(acc);
    }
    out
}

/// The sliding sum can cancel to a tiny negative value next to a large
/// jump, which an odd `s1` would turn into a negative `α`.
#[inline(always)]
fn non_negative<S: Real>(x: S) -> S {
    if x < S::constant(0.0) {
        S::constant(0.0)
    } else {
        x
    }
}

/// Direct double loop over the defining sum.
pub(crate) fn naive_r<S: Real, const R: usize>(w: &[S]) -> [S; R] {
    let w = &w[..2 * R - 1];
    let mut out = [S::constant(0.0); R];
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = S::constant(0.0);
        for j in 0..R - 1 {
            let d = w[i + j + 1] - w[i + j];
            acc = if j == 0 { d * d } else { acc + d * d };
        }
        *o = acc;
    }
    out
}

/// Jiang-Shu indicators through the pivoted sum-of-squares factors.
/// Per indicator: `(r²+r-4)/2` additions, `(r²+3r-4)/2` multiplications.
#[inline(always)]
pub(crate) fn js_r<S: Real, const R: usize>(w: &[S], p: &Packed) -> [S; R] {
    let w = &w[..2 * R - 1];
    let mut out = [S::constant(0.0); R];
    for (i, o) in out.iter_mut().enumerate() {
        let x = &w[i..i + R];
        let perm = &p.perm[i];
        let lower = &p.lower[i];
        let mut total = S::constant(0.0);
        for j in 0..R - 1 {
            let col = &lower[j];
            let mut acc = x[perm[j]];
            for k in j + 1..R {
                acc = acc + S::constant(col[k]) * x[perm[k]];
            }
            let term = S::constant(p.beta[i][j]) * (acc * acc);
            total = if j == 0 { term } else { total + term };
        }
        *o = total;
    }
    out
}

/// `(Σ_t b_t f_t)²`: `2r-2` additions, `2r` multiplications.
#[inline(always)]
pub(crate) fn undivided_r<S: Real, const R: usize>(w: &[S], p: &Packed) -> S {
    let w = &w[..2 * R - 1];
    let b = &p.b[..2 * R - 1];
    let mut acc = S::constant(b[0]) * w[0];
    for t in 1..2 * R - 1 {
        acc = acc + S::constant(b[t]) * w[t];
    }
    acc * acc
}

/// Linear-cost smoothness indicators (recurrence form).
pub fn fast_indicators<S: Real>(window: &StencilWindow<'_, S>) -> Lanes<S> {
    with_order!(window.r(), R => Lanes::from_array(fast_r::<S, R>(window.values())))
}

/// Same indicators evaluated straight from the definition; the oracle for
/// [`fast_indicators`].
pub fn fast_indicators_naive<S: Real>(window: &StencilWindow<'_, S>) -> Lanes<S> {
    with_order!(window.r(), R => Lanes::from_array(naive_r::<S, R>(window.values())))
}

/// Jiang-Shu smoothness indicators.
pub fn js_indicators<S: Real>(
    window: &StencilWindow<'_, S>,
    table: &ReconstructionTable,
) -> Result<Lanes<S>, KernelError> {
    check_table(window.r(), table)?;
    Ok(with_order!(window.r(), R => Lanes::from_array(js_r::<S, R>(window.values(), &table.packed))))
}

/// Squared undivided difference of order `2r-2` over the full window.
pub fn undivided_diff_sq<S: Real>(
    window: &StencilWindow<'_, S>,
    table: &ReconstructionTable,
) -> Result<S, KernelError> {
    check_table(window.r(), table)?;
    Ok(with_order!(window.r(), R => undivided_r::<S, R>(window.values(), &table.packed)))
}
