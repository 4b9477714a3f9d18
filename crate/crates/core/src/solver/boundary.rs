use std::fmt;
use std::sync::Arc;

/// State imposed in ghost points as a function of the coordinate along the
/// boundary and time.
pub type BoundaryRule<const M: usize> = Arc<dyn Fn(f64, f64) -> [f64; M] + Send + Sync>;

/// Ghost-point treatment on one side of the domain.
#[derive(Clone)]
pub enum BoundaryCondition<const M: usize> {
    Periodic,
    /// Fixed state (inflow or Dirichlet).
    Inflow([f64; M]),
    /// Order-zero extrapolation of the nearest interior point.
    Outflow,
    /// Mirror image with the wall-normal momentum negated.
    Reflect,
    TimeDependent(BoundaryRule<M>),
    /// `below` where the coordinate along the boundary is `<= at`, else `above`.
    Piecewise {
        at: f64,
        below: Box<BoundaryCondition<M>>,
        above: Box<BoundaryCondition<M>>,
    },
}

impl<const M: usize> fmt::Debug for BoundaryCondition<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryCondition::Periodic => f.write_str("Periodic"),
            BoundaryCondition::Inflow(u) => write!(f, "Inflow({u:?})"),
            BoundaryCondition::Outflow => f.write_str("Outflow"),
            BoundaryCondition::Reflect => f.write_str("Reflect"),
            BoundaryCondition::TimeDependent(_) => f.write_str("TimeDependent(..)"),
            BoundaryCondition::Piecewise { at, below, above } => {
                write!(f, "Piecewise {{ at: {at}, below: {below:?}, above: {above:?} }}")
            }
        }
    }
}

impl<const M: usize> BoundaryCondition<M> {
    fn is_periodic(&self) -> bool {
        matches!(self, BoundaryCondition::Periodic)
    }

    fn contains_periodic(&self) -> bool {
        match self {
            BoundaryCondition::Periodic => true,
            BoundaryCondition::Piecewise { below, above, .. } => below.contains_periodic() || above.contains_periodic(),
            _ => false,
        }
    }

    fn resolve(&self, along: f64) -> &BoundaryCondition<M> {
        match self {
            BoundaryCondition::Piecewise { at, below, above } => {
                if along <= *at {
                    below.resolve(along)
                } else {
                    above.resolve(along)
                }
            }
            bc => bc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundaryError {
    #[error("periodic boundary on the {0} side must be paired with a periodic {1} side")]
    UnpairedPeriodic(&'static str, &'static str),
    #[error("periodic conditions cannot be piecewise ({0} side)")]
    PiecewisePeriodic(&'static str),
    #[error("{needed} ghost points need at least {needed} interior points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
}

/// Conditions on the four sides; `bottom` and `top` are unused on a line.
#[derive(Clone, Debug)]
pub struct Boundaries<const M: usize> {
    pub left: BoundaryCondition<M>,
    pub right: BoundaryCondition<M>,
    pub bottom: BoundaryCondition<M>,
    pub top: BoundaryCondition<M>,
}

impl<const M: usize> Boundaries<M> {
    pub fn all(bc: BoundaryCondition<M>) -> Self {
        Boundaries { left: bc.clone(), right: bc.clone(), bottom: bc.clone(), top: bc }
    }

    pub fn periodic() -> Self {
        Self::all(BoundaryCondition::Periodic)
    }

    pub fn line(left: BoundaryCondition<M>, right: BoundaryCondition<M>) -> Self {
        Boundaries { left, right, bottom: BoundaryCondition::Outflow, top: BoundaryCondition::Outflow }
    }

    pub fn validate(&self, dims: usize) -> Result<(), BoundaryError> {
        let mut pairs = vec![(&self.left, "left", &self.right, "right")];
        if dims == 2 {
            pairs.push((&self.bottom, "bottom", &self.top, "top"));
        }
        for (a, an, b, bn) in pairs {
            for (bc, name) in [(a, an), (b, bn)] {
                if bc.contains_periodic() && !bc.is_periodic() {
                    return Err(BoundaryError::PiecewisePeriodic(name));
                }
            }
            match (a.is_periodic(), b.is_periodic()) {
                (true, false) => return Err(BoundaryError::UnpairedPeriodic(an, bn)),
                (false, true) => return Err(BoundaryError::UnpairedPeriodic(bn, an)),
                _ => {}
            }
        }
        Ok(())
    }
}

/// Writes `g` ghost points on each end of `line`, whose interior occupies
/// `line[g..len-g]`. `along` is the coordinate of the line on the boundary,
/// `normal` the index of the momentum component normal to the walls.
pub fn fill_ghosts<const M: usize>(
    line: &mut [[f64; M]],
    g: usize,
    lo: &BoundaryCondition<M>,
    hi: &BoundaryCondition<M>,
    along: f64,
    t: f64,
    normal: Option<usize>,
) -> Result<(), BoundaryError> {
    let n = line.len() - 2 * g;
    if n < g {
        return Err(BoundaryError::TooFewPoints { needed: g, found: n });
    }
    for k in 1..=g {
        // low side: ghost at g-k; its mirror is g+k-1
        line[g - k] = match lo.resolve(along) {
            BoundaryCondition::Periodic => line[g + n - k],
            BoundaryCondition::Inflow(u) => *u,
            BoundaryCondition::Outflow => line[g],
            BoundaryCondition::Reflect => reflect(line[g + k - 1], normal),
            BoundaryCondition::TimeDependent(rule) => rule(along, t),
            BoundaryCondition::Piecewise { .. } => unreachable!("resolved"),
        };
        line[g + n + k - 1] = match hi.resolve(along) {
            BoundaryCondition::Periodic => line[g + k - 1],
            BoundaryCondition::Inflow(u) => *u,
            BoundaryCondition::Outflow => line[g + n - 1],
            BoundaryCondition::Reflect => reflect(line[g + n - k], normal),
            BoundaryCondition::TimeDependent(rule) => rule(along, t),
            BoundaryCondition::Piecewise { .. } => unreachable!("resolved"),
        };
    }
    Ok(())
}

fn reflect<const M: usize>(mut u: [f64; M], normal: Option<usize>) -> [f64; M] {
    if let Some(k) = normal {
        u[k] = -u[k];
    }
    u
}

/// A 1D field extended by `g` ghost points on each side.
pub fn apply_boundary<const M: usize>(
    field: &[[f64; M]],
    g: usize,
    left: &BoundaryCondition<M>,
    right: &BoundaryCondition<M>,
    t: f64,
    normal: Option<usize>,
) -> Result<Vec<[f64; M]>, BoundaryError> {
    let mut line = vec![[0.0; M]; field.len() + 2 * g];
    line[g..g + field.len()].copy_from_slice(field);
    fill_ghosts(&mut line, g, left, right, 0.0, t, normal)?;
    Ok(line)
}
