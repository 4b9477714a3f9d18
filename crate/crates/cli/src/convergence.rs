//! Grid-refinement studies against exact solutions.

use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use fweno_core::kernels::WeightDesign;
use fweno_core::solver::ErrorNorms;

use crate::config::{ExperimentId, ExperimentSpec};
use crate::problems::{self, Settings};
use crate::Status;

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1: f64,
    pub l1_order: Option<f64>,
    pub linf: f64,
    pub linf_order: Option<f64>,
    pub kernel_seconds: f64,
    pub total_seconds: f64,
}

/// `log(e_{k-1}/e_k) / log(N_k/N_{k-1})`; `log2` of the error ratio for doublings.
pub fn observed_order(n_prev: usize, e_prev: f64, n: usize, e: f64) -> f64 {
    (e_prev / e).ln() / (n as f64 / n_prev as f64).ln()
}

/// Fills the order columns from the error columns.
pub fn fill_orders(rows: &mut [ConvergenceRow]) {
    for k in 0..rows.len() {
        if k == 0 {
            rows[k].l1_order = None;
            rows[k].linf_order = None;
        } else {
            let (p, c) = (&rows[k - 1], &rows[k]);
            let l1 = observed_order(p.n, p.l1, c.n, c.l1);
            let linf = observed_order(p.n, p.linf, c.n, c.linf);
            rows[k].l1_order = Some(l1);
            rows[k].linf_order = Some(linf);
        }
    }
}

/// The smooth problem driven by a convergence spec.
pub fn smooth_problem(spec: &ExperimentSpec) -> Result<ExperimentId> {
    let id = match spec.experiment {
        ExperimentId::Convergence => spec.problem.unwrap_or(ExperimentId::Advection),
        other => other,
    };
    match id {
        ExperimentId::Advection | ExperimentId::BurgersSmooth => Ok(id),
        other => bail!("no exact solution available for '{other}'"),
    }
}

/// Error of one run of a smooth problem at `N = n`.
pub fn smooth_run(problem: ExperimentId, n: usize, s: &Settings) -> Result<(ErrorNorms, f64, f64)> {
    let t = s.t_final;
    let res = match problem {
        ExperimentId::Advection => {
            let (solver, u0) = problems::advection(n, s)?;
            solver.run_with_exact(u0, 0, |x, _| problems::advection_exact(x, t))?
        }
        ExperimentId::BurgersSmooth => {
            let (solver, u0) = problems::burgers(n, s)?;
            solver.run_with_exact(u0, 0, |x, _| problems::burgers_exact(x, t))?
        }
        other => bail!("no exact solution available for '{other}'"),
    };
    Ok((res.errors.expect("errors requested"), res.kernel_seconds, res.total_seconds))
}

/// All rows of one study, orders filled.
pub fn convergence_study(problem: ExperimentId, s: &Settings, grids: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(grids.len());
    for &n in grids {
        let (e, kernel, total) =
            smooth_run(problem, n, s).with_context(|| format!("{problem} N={n} {}", s.variant.label(s.r)))?;
        rows.push(ConvergenceRow {
            n,
            l1: e.l1,
            l1_order: None,
            linf: e.linf,
            linf_order: None,
            kernel_seconds: kernel,
            total_seconds: total,
        });
    }
    fill_orders(&mut rows);
    Ok(rows)
}

fn fmt_order(o: Option<f64>) -> String {
    o.map(|v| format!("{v:.4}")).unwrap_or_default()
}

/// `N,L1,L1_order,Linf,Linf_order`.
pub fn write_table<W: Write>(w: W, rows: &[ConvergenceRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N", "L1", "L1_order", "Linf", "Linf_order"])?;
    for r in rows {
        out.write_record([
            r.n.to_string(),
            format!("{:e}", r.l1),
            fmt_order(r.l1_order),
            format!("{:e}", r.linf),
            fmt_order(r.linf_order),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Reads back a table written by [`write_table`].
pub fn read_table(path: &Path) -> Result<Vec<ConvergenceRow>> {
    let mut rd = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let opt = |s: &str| -> Result<Option<f64>> { Ok(if s.is_empty() { None } else { Some(s.parse()?) }) };
        rows.push(ConvergenceRow {
            n: rec[0].parse()?,
            l1: rec[1].parse()?,
            l1_order: opt(&rec[2])?,
            linf: rec[3].parse()?,
            linf_order: opt(&rec[4])?,
            kernel_seconds: 0.0,
            total_seconds: 0.0,
        });
    }
    Ok(rows)
}

pub fn output_name(experiment: ExperimentId, design: WeightDesign, r: usize) -> String {
    format!("{experiment}_{}_r{r}", design.short_name())
}

/// Runs every (variant, r) study of `spec`, writes one CSV each and checks
/// the finest-pair order against `2r - 1.5`.
pub fn cmd_convergence(spec: &ExperimentSpec, out: &Path, instrument: bool) -> Result<Status> {
    let problem = smooth_problem(spec)?;
    let report_from = spec.report_from.unwrap_or(match problem {
        ExperimentId::BurgersSmooth => 40,
        _ => 0,
    });
    std::fs::create_dir_all(out)?;
    let mut status = Status::Pass;
    for &r in &spec.r {
        for &design in &spec.variants {
            let mut s = Settings::new(problem, spec, design, r)?;
            s.instrument = instrument;
            let rows = convergence_study(problem, &s, &spec.grids)?;
            let shown: Vec<_> = rows.iter().filter(|row| row.n >= report_from).cloned().collect();
            let path = out.join(format!("{}.csv", output_name(spec.experiment, design, r)));
            write_table(std::fs::File::create(&path)?, &shown)?;
            println!("{} r={r} -> {}", s.variant.label(r), path.display());
            for row in &shown {
                println!(
                    "  N={:5}  L1={:.3e} ({:>7})  Linf={:.3e} ({:>7})",
                    row.n,
                    row.l1,
                    fmt_order(row.l1_order),
                    row.linf,
                    fmt_order(row.linf_order)
                );
            }
            if let Some(order) = rows.last().and_then(|r| r.l1_order) {
                let target = (2 * r - 1) as f64 - 0.5;
                if order < target {
                    eprintln!("{} r={r}: finest-pair L1 order {order:.3} below {target}", s.variant.label(r));
                    status = Status::ThresholdFailed;
                }
            }
        }
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, l1: f64, linf: f64) -> ConvergenceRow {
        ConvergenceRow { n, l1, l1_order: None, linf, linf_order: None, kernel_seconds: 0.0, total_seconds: 0.0 }
    }

    #[test]
    fn orders_from_doublings() {
        let mut rows = vec![row(10, 1.0, 2.0), row(20, 1.0 / 32.0, 0.5), row(40, 1.0 / 1024.0, 0.125)];
        fill_orders(&mut rows);
        assert_eq!(rows[0].l1_order, None);
        assert!((rows[1].l1_order.unwrap() - 5.0).abs() < 1e-12);
        assert!((rows[2].linf_order.unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn single_row_has_blank_orders() {
        let mut rows = vec![row(40, 1e-6, 2e-6)];
        fill_orders(&mut rows);
        let mut buf = Vec::new();
        write_table(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "40,1e-6,,2e-6,");
    }
}
