//! 2D Euler runs: double Mach reflection and the four-quadrant Riemann problem.

use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use fweno_core::kernels::WeightDesign;
use fweno_core::models::pressure;
use fweno_core::solver::{write_field, Field, Grid, RunResult};

use crate::config::{ExperimentId, ExperimentSpec};
use crate::convergence::output_name;
use crate::problems::{self, Settings};
use crate::Status;

/// Contrast constant of the Schlieren mapping.
pub const SCHLIEREN_K: f64 = 15.0;

#[derive(Clone, Debug)]
pub struct Run2d {
    pub grid: Grid,
    pub result: RunResult<4>,
    pub gamma: f64,
}

pub fn run_2d(problem: ExperimentId, n: usize, s: &Settings) -> Result<Run2d> {
    let (solver, u0) = match problem {
        ExperimentId::Dmr => problems::dmr(n, s)?,
        ExperimentId::Riemann2d => problems::riemann2d(n, s)?,
        other => bail!("'{other}' is not a 2D experiment (dmr, riemann2d)"),
    };
    let grid = *solver.grid();
    let result = solver.run(u0)?;
    Ok(Run2d { grid, result, gamma: s.gamma })
}

/// Smallest density and pressure (NaN if any pressure is undefined).
pub fn extrema_2d(field: &Field<4>, gamma: f64) -> (f64, f64) {
    let mut rmin = f64::INFINITY;
    let mut pmin = f64::INFINITY;
    for u in &field.data {
        rmin = rmin.min(u[0]);
        match pressure(u, gamma) {
            Ok(p) if !p.is_nan() => pmin = pmin.min(p),
            _ => return (rmin, f64::NAN),
        }
    }
    (rmin, pmin)
}

/// `‖a - b‖₁ / ‖b‖₁` over one component.
pub fn relative_l1(a: &Field<4>, b: &Field<4>, k: usize) -> f64 {
    let num: f64 = a.data.iter().zip(&b.data).map(|(x, y)| (x[k] - y[k]).abs()).sum();
    let den: f64 = b.data.iter().map(|y| y[k].abs()).sum();
    num / den
}

/// Grayscale Schlieren image of `ρ`: `exp(-k |∇ρ| / max |∇ρ|)` with
/// central differences (one-sided at the edges). Rows run top to bottom.
pub fn schlieren(rho: &[f64], nx: usize, ny: usize, hx: f64, hy: f64, k: f64) -> Vec<u8> {
    let at = |i: usize, j: usize| rho[j * nx + i];
    let diff = |lo: f64, hi: f64, span: usize, h: f64| if span == 0 { 0.0 } else { (hi - lo) / (span as f64 * h) };
    let mut grad = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let (il, ir) = (i.saturating_sub(1), (i + 1).min(nx - 1));
            let (jl, jr) = (j.saturating_sub(1), (j + 1).min(ny - 1));
            let gx = diff(at(il, j), at(ir, j), ir - il, hx);
            let gy = diff(at(i, jl), at(i, jr), jr - jl, hy);
            grad[j * nx + i] = (gx * gx + gy * gy).sqrt();
        }
    }
    let gmax = grad.iter().cloned().fold(0.0, f64::max);
    let mut img = Vec::with_capacity(nx * ny);
    for j in (0..ny).rev() {
        for i in 0..nx {
            let g = if gmax > 0.0 { grad[j * nx + i] / gmax } else { 0.0 };
            img.push((255.0 * (-k * g).exp()).round() as u8);
        }
    }
    img
}

/// Binary 8-bit PGM (P5).
pub fn write_pgm<W: Write>(mut w: W, pixels: &[u8], width: usize, height: usize) -> std::io::Result<()> {
    write!(w, "P5\n{width} {height}\n255\n")?;
    w.write_all(pixels)?;
    w.flush()
}

pub fn cmd_2d(spec: &ExperimentSpec, out: &Path, instrument: bool) -> Result<Status> {
    let problem = spec.experiment;
    if !matches!(problem, ExperimentId::Dmr | ExperimentId::Riemann2d) {
        bail!("'{problem}' is not a 2D experiment (dmr, riemann2d)");
    }
    std::fs::create_dir_all(out)?;
    let mut status = Status::Pass;
    for &r in &spec.r {
        for &n in &spec.grids {
            let mut densities: Vec<(WeightDesign, Field<4>)> = Vec::new();
            for &design in &spec.variants {
                let mut s = Settings::new(problem, spec, design, r)?;
                s.instrument = instrument;
                let name = output_name(problem, design, r);
                let run = run_2d(problem, n, &s).with_context(|| format!("{problem} {} N={n}", s.variant.label(r)))?;
                let field = &run.result.field;
                let (rmin, pmin) = extrema_2d(field, run.gamma);
                if !(rmin > 0.0 && pmin > 0.0) {
                    status = Status::ThresholdFailed;
                }
                let dump = out.join(format!("{name}_N{n}.dat"));
                let f = std::fs::File::create(&dump)?;
                write_field(BufWriter::new(f), field, &run.grid, run.result.t, Some(run.gamma), "euler2d")?;
                let img = schlieren(&field.component(0), field.nx, field.ny, run.grid.hx(), run.grid.hy(), SCHLIEREN_K);
                let pgm = out.join(format!("{name}_N{n}.pgm"));
                write_pgm(BufWriter::new(std::fs::File::create(&pgm)?), &img, field.nx, field.ny)?;
                let mut w = csv::Writer::from_path(out.join(format!("{name}.csv")))?;
                w.write_record(["N", "nx", "ny", "kernel_seconds", "total_seconds", "steps", "min_rho", "min_p"])?;
                w.write_record([
                    n.to_string(),
                    field.nx.to_string(),
                    field.ny.to_string(),
                    format!("{:.6}", run.result.kernel_seconds),
                    format!("{:.6}", run.result.total_seconds),
                    run.result.steps().to_string(),
                    format!("{rmin:e}"),
                    format!("{pmin:e}"),
                ])?;
                w.flush()?;
                println!(
                    "{} {}x{}: {} steps, kernel {:.2}s, min rho {rmin:.4e}, min p {pmin:.4e} -> {}",
                    s.variant.label(r),
                    field.nx,
                    field.ny,
                    run.result.steps(),
                    run.result.kernel_seconds,
                    pgm.display()
                );
                densities.push((design, run.result.field));
            }
            let find = |d| densities.iter().find(|(x, _)| *x == d).map(|(_, f)| f);
            if let (Some(f), Some(y)) = (find(WeightDesign::Fast), find(WeightDesign::YamaleevCarpenter)) {
                println!("N={n}: relative L1(rho) distance FWENO vs YC = {:.4e}", relative_l1(f, y, 0));
            }
        }
    }
    Ok(status)
}
