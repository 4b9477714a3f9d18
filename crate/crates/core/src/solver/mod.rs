//! Finite-difference method-of-lines driver: ghost points, WENO interface
//! fluxes of split point fluxes, conservative differencing, TVD-RK3.

pub mod boundary;
pub mod dump;
pub mod grid;

pub use boundary::{apply_boundary, fill_ghosts, BoundaryCondition, BoundaryError, BoundaryRule, Boundaries};
pub use dump::{read_field, write_field, DumpError, FieldDump};
pub use grid::{sample_line, sample_rect, Axis, ErrorNorms, Field, Grid};

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::coeffgen::{cached_table, CoeffError, DiscretizationMode};
use crate::kernels::{KernelError, OpCounter, Reconstructor, WenoVariant};
use crate::models::{ConservationLaw, Direction, FluxError, InterfaceFluxer, ModelError, SplittingScheme};

/// Time-step size rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DtRule {
    /// `dt = CFL h / α`.
    Standard,
    /// `dt = CFL h^{(2r-1)/3} / α`, keeping the RK3 error below the spatial one.
    OrderMatched,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub cfl: f64,
    pub t_final: f64,
    pub dt_rule: DtRule,
    /// Overrides the CFL rule when set (the last step is still clipped).
    pub fixed_dt: Option<f64>,
    pub splitting: SplittingScheme,
    /// Factor (≥ 1) on the global Lax-Friedrichs speed. Above 1 it keeps
    /// `f - αu` away from a degenerate critical point where the solution
    /// attains the maximal wave speed smoothly.
    pub lf_margin: f64,
    /// Report operation totals (reconstruction count times the
    /// instrumented per-reconstruction cost).
    pub instrument: bool,
}

impl SolverConfig {
    pub fn new(t_final: f64) -> Self {
        SolverConfig {
            cfl: 0.4,
            t_final,
            dt_rule: DtRule::Standard,
            fixed_dt: None,
            splitting: SplittingScheme::DonatMarquina,
            lf_margin: 1.0,
            instrument: false,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::Config(format!("CFL must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(SolverError::Config(format!("final time must be positive, got {}", self.t_final)));
        }
        if !(self.lf_margin >= 1.0 && self.lf_margin.is_finite()) {
            return Err(SolverError::Config(format!("LF margin must be at least 1, got {}", self.lf_margin)));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(SolverError::Config(format!("fixed dt must be positive, got {dt}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Coefficients(#[from] CoeffError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("{dir}-sweep, line {line}")]
    Flux {
        dir: Direction,
        line: usize,
        #[source]
        source: FluxError,
    },
    #[error("inadmissible state at node ({i}, {j})")]
    Inadmissible {
        i: usize,
        j: usize,
        #[source]
        source: ModelError,
    },
    #[error("invalid wave speed {0}")]
    WaveSpeed(f64),
    #[error("step {step}, stage {stage}, t = {t}")]
    Step {
        step: usize,
        stage: usize,
        t: f64,
        #[source]
        source: Box<SolverError>,
    },
}

/// Raw step size for `(h, α)` pairs, one per direction.
pub fn raw_dt(rule: DtRule, cfl: f64, r: usize, spacing: &[(f64, f64)]) -> f64 {
    let p = (2 * r - 1) as f64 / 3.0;
    let rate: f64 = spacing
        .iter()
        .map(|&(h, a)| match rule {
            DtRule::Standard => a / h,
            DtRule::OrderMatched => a / h.powf(p),
        })
        .sum();
    cfl / rate
}

/// Shortens `dt` so that `t + dt` does not pass `t_final`.
pub fn clip_dt(t: f64, dt: f64, t_final: f64) -> f64 {
    if t + dt >= t_final {
        t_final - t
    } else {
        dt
    }
}

/// One Shu-Osher TVD-RK3 step of `u' = L(u, t)`. Stages are evaluated at
/// `t`, `t + dt` and `t + dt/2`; `check` sees every stage result.
pub fn rk3_step<const M: usize, E>(
    u: &mut [[f64; M]],
    t: f64,
    dt: f64,
    mut rhs: impl FnMut(&[[f64; M]], f64, &mut [[f64; M]]) -> Result<(), E>,
    mut check: impl FnMut(usize, &[[f64; M]]) -> Result<(), E>,
) -> Result<(), E> {
    let n = u.len();
    let mut k = vec![[0.0; M]; n];
    let mut stage = vec![[0.0; M]; n];

    rhs(u, t, &mut k)?;
    for p in 0..n {
        for c in 0..M {
            stage[p][c] = u[p][c] + dt * k[p][c];
        }
    }
    check(1, &stage)?;

    rhs(&stage, t + dt, &mut k)?;
    for p in 0..n {
        for c in 0..M {
            stage[p][c] = 0.75 * u[p][c] + 0.25 * (stage[p][c] + dt * k[p][c]);
        }
    }
    check(2, &stage)?;

    rhs(&stage, t + 0.5 * dt, &mut k)?;
    for p in 0..n {
        for c in 0..M {
            // (u + 2v)/3 rather than u/3 + (2/3)v: the rounded 2/3 biases every step
            u[p][c] = (u[p][c] + 2.0 * (stage[p][c] + dt * k[p][c])) / 3.0;
        }
    }
    check(3, u)
}

/// Outcome of [`Solver::run`].
#[derive(Clone, Debug)]
pub struct RunResult<const M: usize> {
    pub field: Field<M>,
    pub t: f64,
    pub dt_history: Vec<f64>,
    /// Wall time spent evaluating the spatial operator.
    pub kernel_seconds: f64,
    pub total_seconds: f64,
    pub reconstructions: u64,
    pub op_count: Option<OpCounter>,
    pub errors: Option<ErrorNorms>,
}

impl<const M: usize> RunResult<M> {
    pub fn steps(&self) -> usize {
        self.dt_history.len()
    }
}

/// A conservation law discretized on a grid with one WENO configuration.
pub struct Solver<L, const M: usize> {
    law: L,
    rec: Reconstructor,
    grid: Grid,
    bc: Boundaries<M>,
    config: SolverConfig,
}

impl<L: ConservationLaw<M>, const M: usize> Solver<L, M> {
    /// Builds the solver; coefficient tables are generated (or fetched
    /// from the cache) here, outside any timed region.
    pub fn new(
        law: L,
        grid: Grid,
        bc: Boundaries<M>,
        r: usize,
        variant: WenoVariant,
        config: SolverConfig,
    ) -> Result<Self, SolverError> {
        config.validate()?;
        if law.spatial_dims() != grid.dims() {
            return Err(SolverError::Config(format!(
                "{} is a {}D model but the grid is {}D",
                law.name(),
                law.spatial_dims(),
                grid.dims()
            )));
        }
        bc.validate(grid.dims())?;
        let table = cached_table(r, DiscretizationMode::CellAverage)?;
        let rec = Reconstructor::new(table, variant)?;
        for n in [grid.nx(), if grid.dims() == 2 { grid.ny() } else { r }] {
            if n < r {
                return Err(BoundaryError::TooFewPoints { needed: r, found: n }.into());
            }
        }
        Ok(Solver { law, rec, grid, bc, config })
    }

    pub fn law(&self) -> &L {
        &self.law
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.rec
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn r(&self) -> usize {
        self.rec.r()
    }

    pub fn check_field(&self, u: &[[f64; M]]) -> Result<(), SolverError> {
        let nx = self.grid.nx();
        for (p, s) in u.iter().enumerate() {
            self.law
                .check_admissible(s)
                .map_err(|source| SolverError::Inadmissible { i: p % nx, j: p / nx, source })?;
        }
        Ok(())
    }

    fn padded_lines(&self, u: &[[f64; M]], t: f64, dir: Direction) -> Result<Vec<Vec<[f64; M]>>, SolverError> {
        let g = self.rec.r();
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let normal = self.law.normal_momentum(dir);
        let build = |line: usize| -> Result<Vec<[f64; M]>, SolverError> {
            match dir {
                Direction::X => {
                    let mut l = vec![[0.0; M]; nx + 2 * g];
                    l[g..g + nx].copy_from_slice(&u[line * nx..(line + 1) * nx]);
                    let along = self.grid.point(0, line).1;
                    fill_ghosts(&mut l, g, &self.bc.left, &self.bc.right, along, t, normal)?;
                    Ok(l)
                }
                Direction::Y => {
                    let mut l = vec![[0.0; M]; ny + 2 * g];
                    for j in 0..ny {
                        l[g + j] = u[j * nx + line];
                    }
                    let along = self.grid.point(line, 0).0;
                    fill_ghosts(&mut l, g, &self.bc.bottom, &self.bc.top, along, t, normal)?;
                    Ok(l)
                }
            }
        };
        let count = match dir {
            Direction::X => ny,
            Direction::Y => nx,
        };
        (0..count).into_par_iter().map(build).collect()
    }

    /// Flux differences `-(f̂_{i+1/2} - f̂_{i-1/2})/h` along every line of
    /// one direction, plus the number of reconstructions performed.
    fn sweep(&self, u: &[[f64; M]], t: f64, dir: Direction) -> Result<(Vec<Vec<[f64; M]>>, u64), SolverError> {
        let lines = self.padded_lines(u, t, dir)?;
        let alpha = match self.config.splitting {
            SplittingScheme::GlobalLaxFriedrichs => {
                let a = lines
                    .par_iter()
                    .map(|l| l.iter().fold(0.0f64, |m, s| m.max(self.law.max_wave_speed(s, dir))))
                    .reduce(|| 0.0, f64::max);
                if !a.is_finite() {
                    return Err(SolverError::WaveSpeed(a));
                }
                a * self.config.lf_margin
            }
            _ => 0.0,
        };
        let h = match dir {
            Direction::X => self.grid.hx(),
            Direction::Y => self.grid.hy(),
        };
        let g = self.rec.r();
        let results: Vec<(Vec<[f64; M]>, u64)> = lines
            .par_iter()
            .enumerate()
            .map_init(
                || InterfaceFluxer::new(&self.law, &self.rec, self.config.splitting, dir),
                |fluxer, (line, states)| {
                    let n = states.len() - 2 * g;
                    let before = fluxer.reconstructions();
                    let mut fhat = vec![[0.0; M]; n + 1];
                    fluxer
                        .line(states, alpha, &mut fhat)
                        .map_err(|source| SolverError::Flux { dir, line, source })?;
                    let diff = (0..n)
                        .map(|i| std::array::from_fn(|c| -(fhat[i + 1][c] - fhat[i][c]) / h))
                        .collect();
                    Ok((diff, fluxer.reconstructions() - before))
                },
            )
            .collect::<Result<_, SolverError>>()?;
        let count = results.iter().map(|r| r.1).sum();
        Ok((results.into_iter().map(|r| r.0).collect(), count))
    }

    fn rhs_into(&self, u: &[[f64; M]], t: f64, out: &mut [[f64; M]]) -> Result<u64, SolverError> {
        let nx = self.grid.nx();
        let (rows, mut count) = self.sweep(u, t, Direction::X)?;
        for (j, row) in rows.into_iter().enumerate() {
            out[j * nx..(j + 1) * nx].copy_from_slice(&row);
        }
        if self.grid.dims() == 2 {
            let (cols, c) = self.sweep(u, t, Direction::Y)?;
            count += c;
            for (i, col) in cols.into_iter().enumerate() {
                for (j, d) in col.into_iter().enumerate() {
                    let o = &mut out[j * nx + i];
                    for c in 0..M {
                        o[c] += d[c];
                    }
                }
            }
        }
        Ok(count)
    }

    /// `L(u)` at time `t` (boundary data evaluated at `t`). Returns the
    /// number of scalar reconstructions performed.
    pub fn spatial_rhs(&self, u: &Field<M>, t: f64, out: &mut Field<M>) -> Result<u64, SolverError> {
        assert!(u.fits(&self.grid) && out.fits(&self.grid), "field does not match the grid");
        self.rhs_into(&u.data, t, &mut out.data)
    }

    /// Largest wave speed per direction over the interior.
    fn wave_speeds(&self, u: &[[f64; M]]) -> Result<Vec<f64>, SolverError> {
        let dirs: &[Direction] = if self.grid.dims() == 2 { &[Direction::X, Direction::Y] } else { &[Direction::X] };
        dirs.iter()
            .map(|&d| {
                let a = u.par_iter().map(|s| self.law.max_wave_speed(s, d)).reduce(|| 0.0, f64::max);
                if a.is_finite() {
                    Ok(a)
                } else {
                    Err(SolverError::WaveSpeed(a))
                }
            })
            .collect()
    }

    /// Step size at time `t`, clipped to land on the final time.
    pub fn compute_dt(&self, u: &Field<M>, t: f64) -> Result<f64, SolverError> {
        let dt = match self.config.fixed_dt {
            Some(dt) => dt,
            None => {
                let speeds = self.wave_speeds(&u.data)?;
                let mut spacing = vec![(self.grid.hx(), speeds[0])];
                if let Some(&ay) = speeds.get(1) {
                    spacing.push((self.grid.hy(), ay));
                }
                let dt = raw_dt(self.config.dt_rule, self.config.cfl, self.r(), &spacing);
                if !(dt > 0.0 && dt.is_finite()) {
                    return Err(SolverError::WaveSpeed(speeds.iter().cloned().fold(0.0, f64::max)));
                }
                dt
            }
        };
        Ok(clip_dt(t, dt, self.config.t_final))
    }

    /// Advances `u` by one RK3 step; returns the reconstruction count and
    /// the time spent in the spatial operator.
    pub fn rk3_step(&self, u: &mut Field<M>, t: f64, dt: f64) -> Result<(u64, Duration), SolverError> {
        let mut count = 0;
        let mut kernel = Duration::ZERO;
        let mut stage_no = 0;
        rk3_step(
            &mut u.data,
            t,
            dt,
            |v, ts, out| {
                stage_no += 1;
                let start = Instant::now();
                let res = self.rhs_into(v, ts, out);
                kernel += start.elapsed();
                count += res.map_err(|e| SolverError::Step { step: 0, stage: stage_no, t: ts, source: Box::new(e) })?;
                Ok(())
            },
            |stage, v| {
                self.check_field(v)
                    .map_err(|e| SolverError::Step { step: 0, stage, t, source: Box::new(e) })
            },
        )?;
        Ok((count, kernel))
    }

    /// Advances `u0` to the final time.
    pub fn run(&self, u0: Field<M>) -> Result<RunResult<M>, SolverError> {
        assert!(u0.fits(&self.grid), "initial field does not match the grid");
        let start = Instant::now();
        self.check_field(&u0.data)?;
        let mut u = u0;
        // Compensated sum of the step sizes: with thousands of equal steps
        // plain accumulation drifts by a systematic phase error.
        let mut t = 0.0;
        let mut carry = 0.0;
        let mut dts = Vec::new();
        let mut kernel = Duration::ZERO;
        let mut count = 0u64;
        let t_final = self.config.t_final;
        while t < t_final {
            let dt = self.compute_dt(&u, t - carry)?;
            let step = dts.len() + 1;
            let (c, k) = self.rk3_step(&mut u, t, dt).map_err(|e| match e {
                SolverError::Step { stage, t, source, .. } => SolverError::Step { step, stage, t, source },
                e => e,
            })?;
            count += c;
            kernel += k;
            dts.push(dt);
            if (t - carry) + dt >= t_final {
                t = t_final;
            } else {
                let y = dt - carry;
                let sum = t + y;
                carry = (sum - t) - y;
                t = sum;
            }
        }
        let op_count = self.config.instrument.then(|| self.rec.op_count().scaled(count));
        Ok(RunResult {
            field: u,
            t,
            dt_history: dts,
            kernel_seconds: kernel.as_secs_f64(),
            total_seconds: start.elapsed().as_secs_f64(),
            reconstructions: count,
            op_count,
            errors: None,
        })
    }

    /// [`Solver::run`] followed by the error of component `k` against
    /// `exact(x, y)` at the final time.
    pub fn run_with_exact(
        &self,
        u0: Field<M>,
        k: usize,
        exact: impl Fn(f64, f64) -> f64,
    ) -> Result<RunResult<M>, SolverError> {
        let mut res = self.run(u0)?;
        res.errors = Some(ErrorNorms::against(&res.field, &self.grid, k, exact));
        Ok(res)
    }
}
