//! Per-window WENO kernels: smoothness indicators, undivided differences,
//! nonlinear weights and the final reconstruction at `x_{1/2}`.
//!
//! Kernels are generic over [`Real`] so the same source runs on `f64` and
//! on the operation-counting [`Counted`]. Internally every kernel is
//! monomorphized on the order parameter `R`; the public entry points
//! dispatch on the runtime `r` once per call.

mod indicators;
mod reconstruct;
mod scalar;
mod variant;
mod weights;

use std::ops::{Deref, DerefMut};

pub use indicators::{fast_indicators, fast_indicators_naive, js_indicators, undivided_diff_sq};
pub use reconstruct::{pipeline_op_count, reconstruct, substencil_values, Reconstructor};
pub use scalar::{count_ops, pow_repeated, Counted, OpCounter, Real};
pub use variant::{WeightDesign, WenoVariant, DEFAULT_EPSILON};
pub use weights::{alphas, weights};

use crate::coeffgen::{ReconstructionTable, MAX_R, MIN_R};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KernelError {
    #[error("window of length {found} does not match r = {r} (expected {})", 2 * r - 1)]
    WindowLength { r: usize, found: usize },
    #[error("order parameter r = {0} unsupported")]
    UnsupportedOrder(usize),
    #[error("window entry {index} is not finite")]
    NonFiniteInput { index: usize },
    #[error("non-finite or vanishing nonlinear weight term (alpha[{index}] = {value})")]
    NonFiniteAlpha { index: usize, value: f64 },
    #[error("invalid variant: {0}")]
    InvalidVariant(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// The `2r-1` values `f_{-r+1}, …, f_{r-1}` feeding one reconstruction.
#[derive(Clone, Copy, Debug)]
pub struct StencilWindow<'a, S> {
    values: &'a [S],
    r: usize,
}

impl<'a, S: Real> StencilWindow<'a, S> {
    pub fn new(values: &'a [S], r: usize) -> Result<Self, KernelError> {
        if !(MIN_R..=MAX_R).contains(&r) {
            return Err(KernelError::UnsupportedOrder(r));
        }
        if values.len() != 2 * r - 1 {
            return Err(KernelError::WindowLength { r, found: values.len() });
        }
        if let Some(index) = values.iter().position(|v| !v.value().is_finite()) {
            return Err(KernelError::NonFiniteInput { index });
        }
        Ok(StencilWindow { values, r })
    }

    /// Window whose length is implied by `values`; panics in debug builds
    /// on an invalid length. Finiteness is not checked.
    pub fn from_slice(values: &'a [S]) -> Self {
        let r = values.len().div_ceil(2);
        debug_assert!(values.len() % 2 == 1 && (MIN_R..=MAX_R).contains(&r));
        StencilWindow { values, r }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn values(&self) -> &'a [S] {
        self.values
    }
}

/// Up to `MAX_R` per-substencil values (indicators, weights, …).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lanes<S> {
    buf: [S; MAX_R],
    len: usize,
}

impl<S: Real> Lanes<S> {
    pub fn from_slice(v: &[S]) -> Self {
        assert!(v.len() <= MAX_R);
        let mut buf = [S::constant(0.0); MAX_R];
        buf[..v.len()].copy_from_slice(v);
        Lanes { buf, len: v.len() }
    }

    pub(crate) fn from_array<const R: usize>(v: [S; R]) -> Self {
        Self::from_slice(&v)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.iter().map(|v| v.value()).collect()
    }
}

impl<S> Deref for Lanes<S> {
    type Target = [S];
    fn deref(&self) -> &[S] {
        &self.buf[..self.len]
    }
}

impl<S> DerefMut for Lanes<S> {
    fn deref_mut(&mut self) -> &mut [S] {
        &mut self.buf[..self.len]
    }
}

/// Expand `$body` with `$R` bound to the runtime order parameter as a
/// constant.
macro_rules! with_order {
    ($r:expr, $R:ident => $body:expr) => {
        match $r {
            2 => {
                const $R: usize = 2;
                $body
            }
            3 => {
                const $R: usize = 3;
                $body
            }
            4 => {
                const $R: usize = 4;
                $body
            }
            5 => {
                const $R: usize = 5;
                $body
            }
            6 => {
                const $R: usize = 6;
                $body
            }
            7 => {
                const $R: usize = 7;
                $body
            }
            8 => {
                const $R: usize = 8;
                $body
            }
            other => panic!("order parameter r = {other} outside [2, 8]"),
        }
    };
}
pub(crate) use with_order;

fn check_table(window_r: usize, table: &ReconstructionTable) -> Result<(), KernelError> {
    if table.r() != window_r {
        return Err(KernelError::WindowLength { r: table.r(), found: 2 * window_r - 1 });
    }
    Ok(())
}
