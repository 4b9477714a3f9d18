use std::sync::Arc;

use super::indicators::{fast_r, js_r, undivided_r};
use super::weights::{alphas_r, weights_r};
use super::{check_table, count_ops, with_order, Counted, KernelError, Lanes, OpCounter, Real, StencilWindow};
use super::{WeightDesign, WenoVariant};
use crate::coeffgen::table::Packed;
use crate::coeffgen::ReconstructionTable;

/// `p_{r,i}(x_{1/2})` for every substencil: `(r-1)r` additions, `r²` products.
#[inline(always)]
pub(crate) fn substencil_r<S: Real, const R: usize>(w: &[S], p: &Packed) -> [S; R] {
    let w = &w[..2 * R - 1];
    let mut out = [S::constant(0.0); R];
    for (i, o) in out.iter_mut().enumerate() {
        let d = &p.d[i];
        let x = &w[i..i + R];
        let mut acc = S::constant(d[0]) * x[0];
        for j in 1..R {
            acc = acc + S::constant(d[j]) * x[j];
        }
        *o = acc;
    }
    out
}

#[inline(always)]
pub(crate) fn reconstruct_r<S: Real, const R: usize>(
    w: &[S],
    p: &Packed,
    v: &WenoVariant,
) -> Result<S, KernelError> {
    let values = substencil_r::<S, R>(w, p);
    let alpha = match v.design {
        WeightDesign::JiangShu => {
            let ind = js_r::<S, R>(w, p);
            alphas_r::<S, R>(v, &ind, S::constant(0.0), &p.c)?
        }
        WeightDesign::YamaleevCarpenter => {
            let ind = js_r::<S, R>(w, p);
            let d = undivided_r::<S, R>(w, p);
            alphas_r::<S, R>(v, &ind, d, &p.c)?
        }
        WeightDesign::Fast => {
            let ind = fast_r::<S, R>(w);
            let d = undivided_r::<S, R>(w, p);
            alphas_r::<S, R>(v, &ind, d, &p.c)?
        }
    };
    let omega = weights_r::<S, R>(&alpha)?;
    let mut q = omega[0] * values[0];
    for i in 1..R {
        q = q + omega[i] * values[i];
    }
    Ok(q)
}

/// The `r` low-order reconstructions at `x_{1/2}`.
pub fn substencil_values<S: Real>(
    window: &StencilWindow<'_, S>,
    table: &ReconstructionTable,
) -> Result<Lanes<S>, KernelError> {
    check_table(window.r(), table)?;
    Ok(with_order!(window.r(), R => Lanes::from_array(substencil_r::<S, R>(window.values(), &table.packed))))
}

/// Full nonlinear reconstruction `q_r(x_{1/2}) = Σ ω_i p_{r,i}(x_{1/2})`.
pub fn reconstruct<S: Real>(
    window: &StencilWindow<'_, S>,
    table: &ReconstructionTable,
    variant: &WenoVariant,
) -> Result<S, KernelError> {
    check_table(window.r(), table)?;
    with_order!(window.r(), R => reconstruct_r::<S, R>(window.values(), &table.packed, variant))
}

/// A validated (table, variant) pair for repeated reconstructions.
#[derive(Clone, Debug)]
pub struct Reconstructor {
    table: Arc<ReconstructionTable>,
    variant: WenoVariant,
}

impl Reconstructor {
    pub fn new(table: Arc<ReconstructionTable>, variant: WenoVariant) -> Result<Self, KernelError> {
        variant.validate(table.r())?;
        Ok(Reconstructor { table, variant })
    }

    pub fn r(&self) -> usize {
        self.table.r()
    }

    pub fn table(&self) -> &ReconstructionTable {
        &self.table
    }

    pub fn variant(&self) -> &WenoVariant {
        &self.variant
    }

    /// Reconstruct from a window of exactly `2r-1` values (not re-validated).
    #[inline]
    pub fn reconstruct<S: Real>(&self, window: &[S]) -> Result<S, KernelError> {
        debug_assert_eq!(window.len(), self.table.window_len());
        with_order!(self.table.r(), R => reconstruct_r::<S, R>(window, &self.table.packed, &self.variant))
    }

    /// Reconstruct at `x_{1/2}` from data stored right to left: `window[k]`
    /// holds `f_{r-1-k}`. Used for the mirrored half of a flux split.
    #[inline]
    pub fn reconstruct_mirrored(&self, window: &[f64]) -> Result<f64, KernelError> {
        let n = self.table.window_len();
        let mut buf = [0.0; crate::coeffgen::MAX_WINDOW];
        for (k, v) in window[..n].iter().enumerate() {
            buf[n - 1 - k] = *v;
        }
        self.reconstruct(&buf[..n])
    }

    /// Operations performed by one reconstruction with this configuration.
    pub fn op_count(&self) -> OpCounter {
        pipeline_op_count(&self.table, &self.variant)
    }
}

/// Instrumented operation count of one full reconstruction (substencil
/// values, indicators, undivided difference, α, ω and the final sum).
/// The kernels are branch-free in the data, so the count is data independent.
pub fn pipeline_op_count(table: &ReconstructionTable, variant: &WenoVariant) -> OpCounter {
    let n = table.window_len();
    let data: Vec<Counted> = (0..n).map(|k| Counted(1.0 + (k * k) as f64)).collect();
    let (res, count) = count_ops(|| with_order!(table.r(), R => reconstruct_r::<Counted, R>(&data, &table.packed, variant)));
    res.expect("instrumented reconstruction on benign data");
    count
}
