//! Initial data, boundary conditions and exact solutions of the test problems.

use std::f64::consts::PI;
use std::sync::Arc;

use anyhow::{bail, Result};
use fweno_core::kernels::{WeightDesign, WenoVariant};
use fweno_core::models::{conserved_1d, conserved_2d, Burgers, Euler1d, Euler2d, LinearAdvection, DEFAULT_GAMMA};
use fweno_core::solver::{Axis, Boundaries, BoundaryCondition, DtRule, Field, Grid, Solver, SolverConfig};
use fweno_core::SplittingScheme;

use crate::config::{ExperimentId, ExperimentSpec};

/// Everything needed to build one solver.
#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub r: usize,
    pub variant: WenoVariant,
    pub cfl: f64,
    pub t_final: f64,
    pub dt_rule: DtRule,
    pub fixed_dt: Option<f64>,
    pub splitting: SplittingScheme,
    pub lf_margin: f64,
    pub gamma: f64,
    pub instrument: bool,
}

/// Per-problem settings used when a config does not override them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemDefaults {
    pub t_final: f64,
    pub dt_rule: DtRule,
    pub splitting: SplittingScheme,
    pub s2: u32,
    pub lf_margin: f64,
}

pub fn problem_defaults(id: ExperimentId) -> ProblemDefaults {
    use ExperimentId::*;
    use SplittingScheme::*;
    let (t_final, dt_rule, splitting, s2, lf_margin) = match id {
        Advection | Convergence => (1.0, DtRule::OrderMatched, GlobalLaxFriedrichs, 1, 1.0),
        // u attains max|u| smoothly, so with the bare speed f - αu would have
        // a degenerate critical point there and the weights lose two orders
        BurgersSmooth => (0.3, DtRule::OrderMatched, GlobalLaxFriedrichs, 1, 1.1),
        BurgersShock => (12.0, DtRule::Standard, DonatMarquina, 1, 1.0),
        ShuOsher => (1.8, DtRule::Standard, DonatMarquina, 1, 1.0),
        Sod => (0.1, DtRule::Standard, DonatMarquina, 1, 1.0),
        Dmr => (0.2, DtRule::Standard, DonatMarquina, 1, 1.0),
        Riemann2d => (0.3, DtRule::Standard, DonatMarquina, 2, 1.0),
        BenchKernels => (1.8, DtRule::Standard, DonatMarquina, 1, 1.0),
    };
    ProblemDefaults { t_final, dt_rule, splitting, s2, lf_margin }
}

impl Settings {
    /// Problem defaults for `problem`, then the overrides of `spec`.
    pub fn new(problem: ExperimentId, spec: &ExperimentSpec, design: WeightDesign, r: usize) -> Result<Self> {
        let d = problem_defaults(problem);
        let mut variant = WenoVariant::new(design, r).with_s2(d.s2);
        if let Some(s) = spec.s {
            variant.s = s;
        }
        if let Some(s1) = spec.s1 {
            variant.s1 = s1;
        }
        if let Some(s2) = spec.s2 {
            variant.s2 = s2;
        }
        if let Some(eps) = spec.eps {
            variant.epsilon = eps;
        }
        variant.validate(r)?;
        Ok(Settings {
            r,
            variant,
            cfl: spec.cfl.unwrap_or(0.4),
            t_final: spec.t_final.unwrap_or(d.t_final),
            dt_rule: spec.dt_rule.unwrap_or(d.dt_rule),
            fixed_dt: spec.fixed_dt,
            splitting: spec.splitting.unwrap_or(d.splitting),
            lf_margin: spec.lf_margin.unwrap_or(d.lf_margin),
            gamma: spec.gamma.unwrap_or(DEFAULT_GAMMA),
            instrument: false,
        })
    }

    /// Defaults of `problem` with the standard variant parameters.
    pub fn defaults(problem: ExperimentId, design: WeightDesign, r: usize) -> Result<Self> {
        Self::new(problem, &ExperimentSpec::new(problem), design, r)
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl: self.cfl,
            t_final: self.t_final,
            dt_rule: self.dt_rule,
            fixed_dt: self.fixed_dt,
            splitting: self.splitting,
            lf_margin: self.lf_margin,
            instrument: self.instrument,
        }
    }
}

/// `0.25 + 0.5 sin(πx)`, the smooth periodic data on `(-1, 1)`.
pub fn smooth_initial(x: f64) -> f64 {
    0.25 + 0.5 * (PI * x).sin()
}

pub fn advection_exact(x: f64, t: f64) -> f64 {
    smooth_initial(x - t)
}

/// Burgers solution from [`smooth_initial`] before shock formation
/// (`t < 2/π`): solves `ξ + t u0(ξ) = x` by Newton's method.
pub fn burgers_exact(x: f64, t: f64) -> f64 {
    assert!(t < 2.0 / PI, "characteristics cross at t = 2/π");
    let mut xi = x - t * smooth_initial(x);
    for _ in 0..100 {
        let f = xi + t * smooth_initial(xi) - x;
        let df = 1.0 + t * 0.5 * PI * (PI * xi).cos();
        let step = f / df;
        xi -= step;
        if step.abs() <= 1e-16 * (1.0 + xi.abs()) {
            break;
        }
    }
    smooth_initial(xi)
}

pub fn advection(n: usize, s: &Settings) -> Result<(Solver<LinearAdvection, 1>, Field<1>)> {
    let grid = Grid::line(-1.0, 1.0, n);
    let solver = Solver::new(LinearAdvection::default(), grid, Boundaries::periodic(), s.r, s.variant, s.solver_config())?;
    Ok((solver, Field::from_fn(&grid, |x, _| [smooth_initial(x)])))
}

pub fn burgers(n: usize, s: &Settings) -> Result<(Solver<Burgers, 1>, Field<1>)> {
    let grid = Grid::line(-1.0, 1.0, n);
    let solver = Solver::new(Burgers, grid, Boundaries::periodic(), s.r, s.variant, s.solver_config())?;
    Ok((solver, Field::from_fn(&grid, |x, _| [smooth_initial(x)])))
}

/// Post-shock state of the Mach 3 shock, `(ρ, v, p)`.
pub fn shu_osher_left() -> (f64, f64, f64) {
    (27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0)
}

pub fn shu_osher(n: usize, s: &Settings) -> Result<(Solver<Euler1d, 3>, Field<3>)> {
    let grid = Grid::line(-5.0, 5.0, n);
    let (rl, vl, pl) = shu_osher_left();
    let left = conserved_1d(rl, vl, pl, s.gamma);
    let gamma = s.gamma;
    let u0 = Field::from_fn(&grid, |x, _| {
        if x <= -4.0 {
            left
        } else {
            conserved_1d(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0, gamma)
        }
    });
    let bc = Boundaries::line(BoundaryCondition::Inflow(left), BoundaryCondition::Outflow);
    let solver = Solver::new(Euler1d { gamma }, grid, bc, s.r, s.variant, s.solver_config())?;
    Ok((solver, u0))
}

pub fn sod(n: usize, s: &Settings) -> Result<(Solver<Euler1d, 3>, Field<3>)> {
    let grid = Grid::line(0.0, 1.0, n);
    let left = conserved_1d(1.0, 0.0, 1.0, s.gamma);
    let right = conserved_1d(0.125, 0.0, 0.1, s.gamma);
    let u0 = Field::from_fn(&grid, |x, _| if x <= 0.5 { left } else { right });
    let bc = Boundaries::line(BoundaryCondition::Inflow(left), BoundaryCondition::Inflow(right));
    let solver = Solver::new(Euler1d { gamma: s.gamma }, grid, bc, s.r, s.variant, s.solver_config())?;
    Ok((solver, u0))
}

/// Conserved state from `(ρ, vx, vy, E)`.
pub fn from_velocity_energy(c: [f64; 4]) -> [f64; 4] {
    [c[0], c[0] * c[1], c[0] * c[2], c[3]]
}

/// Post-shock state `(ρ, vx, vy, E)` of the Mach 10 shock.
pub fn dmr_c1() -> [f64; 4] {
    [8.0, 8.25 * (PI / 6.0).cos(), -8.25 * (PI / 6.0).sin(), 563.5]
}

/// Gas at rest ahead of the shock, `(ρ, vx, vy, E)`.
pub fn dmr_c2() -> [f64; 4] {
    [1.4, 0.0, 0.0, 2.5]
}

/// Initial state of the reflection problem at `(x, y)`.
pub fn dmr_initial(x: f64, y: f64) -> [f64; 4] {
    if y <= 0.25 + (PI / 6.0).tan() * x {
        from_velocity_energy(dmr_c1())
    } else {
        from_velocity_energy(dmr_c2())
    }
}

/// Ghost state above the top wall, following the shock at its speed.
pub fn dmr_top(x: f64, t: f64) -> [f64; 4] {
    if x <= 0.25 + (1.0 + 20.0 * t) / 3f64.sqrt() {
        from_velocity_energy(dmr_c1())
    } else {
        from_velocity_energy(dmr_c2())
    }
}

pub fn dmr_boundaries() -> Boundaries<4> {
    Boundaries {
        left: BoundaryCondition::Inflow(from_velocity_energy(dmr_c1())),
        right: BoundaryCondition::Outflow,
        bottom: BoundaryCondition::Piecewise {
            at: 0.25,
            below: Box::new(BoundaryCondition::Outflow),
            above: Box::new(BoundaryCondition::Reflect),
        },
        top: BoundaryCondition::TimeDependent(Arc::new(dmr_top)),
    }
}

/// `nx × nx/4` grid on `[0, 4] × [0, 1]`.
pub fn dmr(nx: usize, s: &Settings) -> Result<(Solver<Euler2d, 4>, Field<4>)> {
    if nx % 4 != 0 {
        bail!("double Mach reflection needs N divisible by 4, got {nx}");
    }
    let grid = Grid::rect(Axis::new(0.0, 4.0, nx), Axis::new(0.0, 1.0, nx / 4));
    let solver = Solver::new(Euler2d { gamma: s.gamma }, grid, dmr_boundaries(), s.r, s.variant, s.solver_config())?;
    Ok((solver, Field::from_fn(&grid, dmr_initial)))
}

/// Quadrant data `(ρ, vx, vy, p)` of the 2D Riemann problem.
pub fn riemann_primitive(x: f64, y: f64) -> [f64; 4] {
    match (x > 0.5, y > 0.5) {
        (true, true) => [1.5, 0.0, 0.0, 1.5],
        (false, true) => [0.5323, 1.206, 0.0, 0.3],
        (false, false) => [0.138, 1.206, 1.206, 0.029],
        (true, false) => [0.5323, 0.0, 1.206, 0.3],
    }
}

pub fn riemann2d(n: usize, s: &Settings) -> Result<(Solver<Euler2d, 4>, Field<4>)> {
    let grid = Grid::rect(Axis::new(0.0, 1.0, n), Axis::new(0.0, 1.0, n));
    let gamma = s.gamma;
    let u0 = Field::from_fn(&grid, |x, y| {
        let [rho, vx, vy, p] = riemann_primitive(x, y);
        conserved_2d(rho, vx, vy, p, gamma)
    });
    let solver = Solver::new(
        Euler2d { gamma },
        grid,
        Boundaries::all(BoundaryCondition::Outflow),
        s.r,
        s.variant,
        s.solver_config(),
    )?;
    Ok((solver, u0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fweno_core::models::pressure;

    #[test]
    fn burgers_characteristics() {
        assert_eq!(burgers_exact(0.3, 0.0), smooth_initial(0.3));
        for &x in &[-0.9, -0.2, 0.0, 0.45, 0.99] {
            let t = 0.3;
            let u = burgers_exact(x, t);
            // u is constant along the characteristic through x - u t
            assert!((u - smooth_initial(x - u * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn dmr_data() {
        let c1 = from_velocity_energy(dmr_c1());
        assert_eq!(dmr_top(0.0, 0.0), c1);
        assert_eq!(c1[0], 8.0);
        assert!((c1[1] - 8.0 * 8.25 * (PI / 6.0).cos()).abs() < 1e-12);
        assert!((c1[2] + 8.0 * 8.25 * 0.5).abs() < 1e-12);
        assert_eq!(c1[3], 563.5);
        // post-shock pressure of the Mach 10 shock
        assert!((pressure(&c1, 1.4).unwrap() - 116.5).abs() < 1e-10);
        assert!((pressure(&from_velocity_energy(dmr_c2()), 1.4).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(dmr_initial(0.0, 0.5), from_velocity_energy(dmr_c2()));
        assert_eq!(dmr_initial(1.0, 0.5), c1);
    }

    #[test]
    fn riemann_quadrants() {
        assert_eq!(riemann_primitive(0.75, 0.75), [1.5, 0.0, 0.0, 1.5]);
        assert_eq!(riemann_primitive(0.25, 0.25), [0.138, 1.206, 1.206, 0.029]);
        assert_eq!(riemann_primitive(0.5, 0.75), [0.5323, 1.206, 0.0, 0.3]);
    }

    #[test]
    fn settings_apply_overrides() {
        let mut spec = ExperimentSpec::new(ExperimentId::Riemann2d);
        let s = Settings::new(ExperimentId::Riemann2d, &spec, WeightDesign::Fast, 3).unwrap();
        assert_eq!((s.variant.s1, s.variant.s2), (2, 2));
        assert_eq!(s.t_final, 0.3);
        spec.s2 = Some(1);
        spec.cfl = Some(0.2);
        let s = Settings::new(ExperimentId::Riemann2d, &spec, WeightDesign::Fast, 3).unwrap();
        assert_eq!((s.variant.s2, s.cfl), (1, 0.2));
        spec.s1 = Some(1);
        // 2 s1 s2 < r is rejected
        assert!(Settings::new(ExperimentId::Riemann2d, &spec, WeightDesign::Fast, 3).is_err());
    }
}
