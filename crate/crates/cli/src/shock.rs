//! 1D shock problems: field dumps, distance to a fine reference, and the
//! positivity / maximum-principle checks.

use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fweno_core::kernels::WeightDesign;
use fweno_core::models::{pressure, ConservationLaw};
use fweno_core::solver::{sample_line, write_field, ErrorNorms, Field, Grid, RunResult};

use crate::config::{ExperimentId, ExperimentSpec};
use crate::convergence::output_name;
use crate::problems::{self, Settings};
use crate::Status;

/// A finished 1D run with the data needed for reports.
#[derive(Clone, Debug)]
pub struct ShockRun<const M: usize> {
    pub grid: Grid,
    pub result: RunResult<M>,
    pub gamma: Option<f64>,
    pub model: &'static str,
}

impl<const M: usize> ShockRun<M> {
    pub fn field(&self) -> &Field<M> {
        &self.result.field
    }

    /// Distance of component `k` to `reference` sampled at this grid's nodes.
    pub fn distance_to(&self, reference: &ShockRun<M>, k: usize) -> ErrorNorms {
        ErrorNorms::against(self.field(), &self.grid, k, |x, _| sample_line(reference.field(), &reference.grid, x)[k])
    }

    pub fn write_dump(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_field(BufWriter::new(f), self.field(), &self.grid, self.result.t, self.gamma, self.model)?;
        Ok(())
    }
}

fn finish<L: ConservationLaw<M>, const M: usize>(
    solver: fweno_core::Solver<L, M>,
    u0: Field<M>,
) -> Result<ShockRun<M>> {
    let grid = *solver.grid();
    let (gamma, model) = (solver.law().gamma(), solver.law().name());
    let result = solver.run(u0)?;
    Ok(ShockRun { grid, result, gamma, model })
}

pub fn run_scalar(problem: ExperimentId, n: usize, s: &Settings) -> Result<ShockRun<1>> {
    match problem {
        ExperimentId::BurgersShock | ExperimentId::BurgersSmooth => {
            let (solver, u0) = problems::burgers(n, s)?;
            finish(solver, u0)
        }
        ExperimentId::Advection => {
            let (solver, u0) = problems::advection(n, s)?;
            finish(solver, u0)
        }
        other => bail!("'{other}' is not a scalar problem"),
    }
}

pub fn run_euler(problem: ExperimentId, n: usize, s: &Settings) -> Result<ShockRun<3>> {
    match problem {
        ExperimentId::ShuOsher => {
            let (solver, u0) = problems::shu_osher(n, s)?;
            finish(solver, u0)
        }
        ExperimentId::Sod => {
            let (solver, u0) = problems::sod(n, s)?;
            finish(solver, u0)
        }
        other => bail!("'{other}' is not a 1D Euler problem"),
    }
}

/// Default reference resolution of each shock problem.
pub fn default_reference(problem: ExperimentId) -> Option<usize> {
    match problem {
        ExperimentId::ShuOsher => Some(4000),
        ExperimentId::Sod => Some(8000),
        _ => None,
    }
}

/// Settings of the reference computation: Jiang-Shu WENO5 with the
/// problem's splitting, CFL and final time.
pub fn reference_settings(problem: ExperimentId, spec: &ExperimentSpec) -> Result<Settings> {
    let mut plain = ExperimentSpec::new(spec.experiment);
    plain.cfl = spec.cfl;
    plain.t_final = spec.t_final;
    plain.splitting = spec.splitting;
    plain.gamma = spec.gamma;
    Settings::new(problem, &plain, WeightDesign::JiangShu, 3)
}

/// Smallest density and pressure of a 1D Euler field.
pub fn euler_extrema(field: &Field<3>, gamma: f64) -> (f64, f64) {
    field.data.iter().fold((f64::INFINITY, f64::INFINITY), |(rmin, pmin), u| {
        let p = pressure(u, gamma).unwrap_or(f64::NAN);
        (rmin.min(u[0]), if p.is_nan() { f64::NAN } else { pmin.min(p) })
    })
}

/// Largest excursion of a scalar field outside `[lo, hi]`.
pub fn range_violation(field: &Field<1>, lo: f64, hi: f64) -> f64 {
    field
        .data
        .iter()
        .map(|u| if u[0].is_nan() { f64::INFINITY } else { (lo - u[0]).max(u[0] - hi).max(0.0) })
        .fold(0.0, f64::max)
}

/// Tolerance of the discrete maximum principle check.
pub const MAX_PRINCIPLE_TOL: f64 = 1e-10;

fn summary_writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["N", "L1", "Linf", "kernel_seconds", "total_seconds", "steps", "check"])?;
    Ok(w)
}

pub fn cmd_shock(spec: &ExperimentSpec, out: &Path, instrument: bool) -> Result<Status> {
    std::fs::create_dir_all(out)?;
    let problem = spec.experiment;
    let mut status = Status::Pass;
    match problem {
        ExperimentId::BurgersShock => {
            let lo = 0.25 - 0.5;
            let hi = 0.25 + 0.5;
            for &r in &spec.r {
                for &design in &spec.variants {
                    let mut s = Settings::new(problem, spec, design, r)?;
                    s.instrument = instrument;
                    let name = output_name(problem, design, r);
                    let mut w = summary_writer(&out.join(format!("{name}.csv")))?;
                    for &n in &spec.grids {
                        let run = run_scalar(problem, n, &s)?;
                        run.write_dump(&out.join(format!("{name}_N{n}.dat")))?;
                        let excess = range_violation(run.field(), lo, hi);
                        let ok = excess <= MAX_PRINCIPLE_TOL;
                        if !ok {
                            status = Status::ThresholdFailed;
                        }
                        println!(
                            "{} N={n}: range excess {excess:.3e} ({}), kernel {:.3}s",
                            s.variant.label(r),
                            if ok { "ok" } else { "VIOLATED" },
                            run.result.kernel_seconds
                        );
                        w.write_record([
                            n.to_string(),
                            String::new(),
                            String::new(),
                            format!("{:.6}", run.result.kernel_seconds),
                            format!("{:.6}", run.result.total_seconds),
                            run.result.steps().to_string(),
                            format!("range_excess={excess:e}"),
                        ])?;
                    }
                    w.flush()?;
                }
            }
        }
        ExperimentId::ShuOsher | ExperimentId::Sod => {
            let reference = match spec.reference.or(default_reference(problem)) {
                Some(nref) => {
                    let rs = reference_settings(problem, spec)?;
                    println!("reference: {} N={nref}", rs.variant.label(3));
                    let run = run_euler(problem, nref, &rs).context("reference solution")?;
                    run.write_dump(&out.join(format!("{problem}_reference_N{nref}.dat")))?;
                    Some(run)
                }
                None => None,
            };
            for &r in &spec.r {
                for &design in &spec.variants {
                    let mut s = Settings::new(problem, spec, design, r)?;
                    s.instrument = instrument;
                    let name = output_name(problem, design, r);
                    let mut w = summary_writer(&out.join(format!("{name}.csv")))?;
                    for &n in &spec.grids {
                        let run = run_euler(problem, n, &s)?;
                        run.write_dump(&out.join(format!("{name}_N{n}.dat")))?;
                        let (rmin, pmin) = euler_extrema(run.field(), s.gamma);
                        let err = reference.as_ref().map(|rf| run.distance_to(rf, 0));
                        println!(
                            "{} N={n}: L1(rho)={}  min rho {rmin:.4e}  min p {pmin:.4e}  kernel {:.3}s",
                            s.variant.label(r),
                            err.map_or("-".into(), |e| format!("{:.4e}", e.l1)),
                            run.result.kernel_seconds
                        );
                        w.write_record([
                            n.to_string(),
                            err.map_or(String::new(), |e| format!("{:e}", e.l1)),
                            err.map_or(String::new(), |e| format!("{:e}", e.linf)),
                            format!("{:.6}", run.result.kernel_seconds),
                            format!("{:.6}", run.result.total_seconds),
                            run.result.steps().to_string(),
                            format!("min_rho={rmin:e};min_p={pmin:e}"),
                        ])?;
                    }
                    w.flush()?;
                }
            }
        }
        other => bail!("'{other}' is not a shock experiment (burgers-shock, shu-osher, sod)"),
    }
    Ok(status)
}
