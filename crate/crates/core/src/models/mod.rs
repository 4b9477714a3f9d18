//! Conservation-law models: flux functions, wave speeds and characteristic
//! eigensystems for linear advection, inviscid Burgers and the 1D/2D
//! Euler equations of gas dynamics.

mod euler;
mod scalar;
mod splitting;

pub use euler::{conserved_1d, conserved_2d, pressure, sound_speed, Euler1d, Euler2d, DEFAULT_GAMMA};
pub use scalar::{Burgers, LinearAdvection};
pub use splitting::{lf_split, FluxError, InterfaceFluxer, SplittingScheme};

use std::fmt;

/// Spatial direction of a flux.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    X,
    Y,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::X => "x",
            Direction::Y => "y",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModelError {
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("non-positive pressure {0}")]
    NonPositivePressure(f64),
    #[error("non-finite state component {0}")]
    NonFinite(usize),
    #[error("inadmissible Roe-averaged state (c^2 = {0})")]
    InadmissibleRoeState(f64),
    #[error("direction {0} not available for a {1}D model")]
    Direction(Direction, usize),
}

/// Left/right eigenvectors and eigenvalues of a flux Jacobian.
///
/// `right[row][col]` holds eigenvector `col`; `left[row]` is the left
/// eigenvector of field `row`, so `left · right = I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigensystem<const M: usize> {
    pub left: [[f64; M]; M],
    pub right: [[f64; M]; M],
    pub lambda: [f64; M],
}

impl<const M: usize> Eigensystem<M> {
    pub fn identity(lambda: [f64; M]) -> Self {
        let mut id = [[0.0; M]; M];
        for (k, row) in id.iter_mut().enumerate() {
            row[k] = 1.0;
        }
        Eigensystem { left: id, right: id, lambda }
    }

    /// Characteristic variables `L u` of field `s`.
    #[inline(always)]
    pub fn project(&self, s: usize, u: &[f64; M]) -> f64 {
        let l = &self.left[s];
        let mut acc = 0.0;
        for k in 0..M {
            acc += l[k] * u[k];
        }
        acc
    }
}

/// One hyperbolic system `u_t + Σ_d f_d(u)_{x_d} = 0` with `M` components.
pub trait ConservationLaw<const M: usize>: Send + Sync {
    fn name(&self) -> &'static str;

    /// 1 or 2.
    fn spatial_dims(&self) -> usize;

    fn flux(&self, u: &[f64; M], dir: Direction) -> [f64; M];

    /// Eigenvalues of the flux Jacobian at `u`, in field order.
    fn eigenvalues(&self, u: &[f64; M], dir: Direction) -> [f64; M];

    fn max_wave_speed(&self, u: &[f64; M], dir: Direction) -> f64 {
        self.eigenvalues(u, dir).iter().fold(0.0, |m, l| m.max(l.abs()))
    }

    /// Eigensystem at the Roe average of `ul` and `ur`.
    fn roe_eigensystem(&self, ul: &[f64; M], ur: &[f64; M], dir: Direction) -> Result<Eigensystem<M>, ModelError>;

    fn eigensystem_at(&self, u: &[f64; M], dir: Direction) -> Result<Eigensystem<M>, ModelError> {
        self.roe_eigensystem(u, u, dir)
    }

    fn check_admissible(&self, u: &[f64; M]) -> Result<(), ModelError> {
        match u.iter().position(|v| !v.is_finite()) {
            Some(k) => Err(ModelError::NonFinite(k)),
            None => Ok(()),
        }
    }

    /// Component holding the momentum normal to a wall facing `dir`.
    fn normal_momentum(&self, _dir: Direction) -> Option<usize> {
        None
    }

    fn gamma(&self) -> Option<f64> {
        None
    }
}

/// Largest wave speed over a set of states.
pub fn max_wave_speed<const M: usize, L: ConservationLaw<M> + ?Sized>(
    law: &L,
    states: &[[f64; M]],
    dir: Direction,
) -> Result<f64, ModelError> {
    let mut a: f64 = 0.0;
    for u in states {
        law.check_admissible(u)?;
        a = a.max(law.max_wave_speed(u, dir));
    }
    Ok(a)
}
