//! Kernel benchmarks: operation-count report, isolated indicator timing and
//! the error-versus-time efficiency study.

use std::hint::black_box;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use fweno_core::coeffgen::{cached_table, DiscretizationMode, ReconstructionTable};
use fweno_core::kernels::{
    fast_indicators, js_indicators, pipeline_op_count, OpCounter, undivided_diff_sq, StencilWindow, WeightDesign, WenoVariant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentId, ExperimentSpec};
use crate::problems::Settings;
use crate::shock::{default_reference, reference_settings, run_euler};
use crate::Status;

/// Closed-form cost of one reconstruction: additions, multiplications,
/// divisions and the grand total, which counts additions and
/// multiplications only.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub additions: i64,
    pub multiplications: i64,
    pub divisions: i64,
    pub total: i64,
}

pub fn closed_form(design: WeightDesign, r: usize, v: &WenoVariant) -> ClosedForm {
    let r = r as i64;
    let (s, s1, s2) = (v.s as i64, v.s1 as i64, v.s2 as i64);
    let (additions, multiplications, total) = match design {
        WeightDesign::JiangShu => (
            (r * r * r + 3 * r * r - 4) / 2,
            (r * r * r + 5 * r * r + (2 * s - 2) * r) / 2,
            r * r * r + 4 * r * r + (s - 1) * r - 2,
        ),
        WeightDesign::YamaleevCarpenter => (
            (r * r * r + 3 * r * r + 6 * r - 8) / 2,
            (r * r * r + 5 * r * r + (4 * s1 + 2 * s2) * r) / 2,
            r * r * r + 4 * r * r + (2 * s1 + s2 + 3) * r - 4,
        ),
        WeightDesign::Fast => (
            r * r + 10 * r - 10,
            r * r + (2 * s1 + s2 + 4) * r - 2,
            2 * r * r + (2 * s1 + s2 + 14) * r - 12,
        ),
    };
    ClosedForm { additions, multiplications, divisions: r + 1, total }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpCountRow {
    pub design: WeightDesign,
    pub r: usize,
    pub s: u32,
    pub s1: u32,
    pub s2: u32,
    pub instrumented: OpCounter,
    pub closed_form: ClosedForm,
}

impl OpCountRow {
    /// Integer equality of every tally and of the grand total.
    pub fn matches(&self) -> bool {
        let (i, c) = (&self.instrumented, &self.closed_form);
        i.additions as i64 == c.additions
            && i.multiplications as i64 == c.multiplications
            && i.divisions as i64 == c.divisions
            && i.arithmetic() as i64 == c.total
    }
}

/// Instrumented pipeline tallies against the closed forms for `r` in
/// `rs`, default exponents and `s2 ∈ {1, 2}` (the JS count ignores `s2`).
pub fn op_count_report(rs: impl IntoIterator<Item = usize>) -> Result<Vec<OpCountRow>> {
    let mut rows = Vec::new();
    for r in rs {
        let table = cached_table(r, DiscretizationMode::CellAverage)?;
        for design in WeightDesign::ALL {
            let s2s: &[u32] = if design == WeightDesign::JiangShu { &[1] } else { &[1, 2] };
            for &s2 in s2s {
                let v = WenoVariant::new(design, r).with_s2(s2);
                rows.push(OpCountRow {
                    design,
                    r,
                    s: v.s,
                    s1: v.s1,
                    s2,
                    instrumented: pipeline_op_count(&table, &v),
                    closed_form: closed_form(design, r, &v),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_op_counts<W: Write>(w: W, rows: &[OpCountRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "variant", "r", "s", "s1", "s2", "add", "add_formula", "mul", "mul_formula", "div", "div_formula", "total",
        "total_formula", "match",
    ])?;
    for row in rows {
        let (i, c) = (&row.instrumented, &row.closed_form);
        out.write_record([
            row.design.short_name().to_string(),
            row.r.to_string(),
            row.s.to_string(),
            row.s1.to_string(),
            row.s2.to_string(),
            i.additions.to_string(),
            c.additions.to_string(),
            i.multiplications.to_string(),
            c.multiplications.to_string(),
            i.divisions.to_string(),
            c.divisions.to_string(),
            i.arithmetic().to_string(),
            c.total.to_string(),
            row.matches().to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `n` windows of `2r-1` values, uniform in `[-1, 1)`, stored back to back.
pub fn random_windows(r: usize, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n * (2 * r - 1)).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Seconds per window of the isolated indicator stages.
#[derive(Clone, Copy, Debug)]
pub struct IndicatorTiming {
    pub r: usize,
    pub windows: usize,
    pub repetitions: usize,
    /// Fast indicators alone.
    pub fast: f64,
    /// Jiang-Shu sum-of-squares indicators alone.
    pub js: f64,
    /// Fast indicators plus the undivided difference (FWENO weights input).
    pub fast_with_diff: f64,
    /// Jiang-Shu indicators plus the undivided difference (YC weights input).
    pub js_with_diff: f64,
}

impl IndicatorTiming {
    pub fn speedup_vs_js(&self) -> f64 {
        self.js / self.fast
    }

    pub fn speedup_vs_yc(&self) -> f64 {
        self.js_with_diff / self.fast_with_diff
    }
}

/// Shortest pass below this is treated as unresolved and the repetition
/// count is doubled.
const MIN_PASS: Duration = Duration::from_millis(50);

// generic so each stage inlines into its own loop; a `dyn` call per window
// adds the same fixed cost to every stage and compresses the ratios
fn time_stage<F: Fn(&[f64]) -> f64>(data: &[f64], width: usize, stage: &F) -> (f64, usize) {
    let windows = data.len() / width;
    let pass = |reps: usize| {
        let start = Instant::now();
        let mut acc = 0.0;
        for _ in 0..reps {
            for w in data.chunks_exact(width) {
                acc += stage(black_box(w));
            }
        }
        black_box(acc);
        start.elapsed()
    };
    let mut reps = 1;
    while pass(reps) < MIN_PASS {
        reps *= 2;
    }
    // best of three passes at the resolved repetition count
    let best = (0..3).map(|_| pass(reps)).min().expect("three passes");
    (best.as_secs_f64() / (reps * windows) as f64, reps)
}

fn sum(v: &[f64]) -> f64 {
    v.iter().sum()
}

pub fn time_indicators(r: usize, windows: usize, seed: u64) -> Result<IndicatorTiming> {
    let table: std::sync::Arc<ReconstructionTable> = cached_table(r, DiscretizationMode::CellAverage)?;
    let width = 2 * r - 1;
    let data = random_windows(r, windows, seed);
    let t = &*table;
    let fast = |w: &[f64]| sum(&fast_indicators(&StencilWindow::from_slice(w)));
    let js = |w: &[f64]| sum(&js_indicators(&StencilWindow::from_slice(w), t).expect("table matches r"));
    let fast_d = |w: &[f64]| {
        let win = StencilWindow::from_slice(w);
        sum(&fast_indicators(&win)) + undivided_diff_sq(&win, t).expect("table matches r")
    };
    let js_d = |w: &[f64]| {
        let win = StencilWindow::from_slice(w);
        sum(&js_indicators(&win, t).expect("table matches r")) + undivided_diff_sq(&win, t).expect("table matches r")
    };
    let (fast, reps) = time_stage(&data, width, &fast);
    let (js, _) = time_stage(&data, width, &js);
    let (fast_with_diff, _) = time_stage(&data, width, &fast_d);
    let (js_with_diff, _) = time_stage(&data, width, &js_d);
    Ok(IndicatorTiming { r, windows, repetitions: reps, fast, js, fast_with_diff, js_with_diff })
}

/// Runs per efficiency point; the fastest is reported.
pub const EFFICIENCY_REPEATS: usize = 3;

/// One point of the error-versus-time study.
#[derive(Clone, Debug)]
pub struct EfficiencyRow {
    pub design: WeightDesign,
    pub r: usize,
    pub n: usize,
    pub l1: f64,
    pub kernel_seconds: f64,
    pub total_seconds: f64,
}

/// Shu-Osher runs of every (variant, r, N) of `spec`, with the L1 density
/// distance to a Jiang-Shu WENO5 reference at `reference` points. Each run
/// is repeated `repeats` times and the fastest timings are kept.
pub fn efficiency_study(spec: &ExperimentSpec, reference: usize, repeats: usize) -> Result<Vec<EfficiencyRow>> {
    let problem = ExperimentId::ShuOsher;
    let mut shu = spec.clone();
    shu.experiment = problem;
    let rs = reference_settings(problem, &shu)?;
    let refrun = run_euler(problem, reference, &rs).context("efficiency reference")?;
    let mut rows = Vec::new();
    for &r in &spec.r {
        for &design in &spec.variants {
            let s = Settings::new(problem, &shu, design, r)?;
            for &n in &spec.grids {
                let run = run_euler(problem, n, &s).with_context(|| format!("{} N={n}", s.variant.label(r)))?;
                let (mut kernel, mut total) = (run.result.kernel_seconds, run.result.total_seconds);
                for _ in 1..repeats {
                    let again = run_euler(problem, n, &s)?;
                    kernel = kernel.min(again.result.kernel_seconds);
                    total = total.min(again.result.total_seconds);
                }
                rows.push(EfficiencyRow {
                    design,
                    r,
                    n,
                    l1: run.distance_to(&refrun, 0).l1,
                    kernel_seconds: kernel,
                    total_seconds: total,
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_efficiency<W: Write>(w: W, rows: &[EfficiencyRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["variant", "r", "N", "L1", "kernel_seconds", "total_seconds"])?;
    for row in rows {
        out.write_record([
            row.design.short_name().to_string(),
            row.r.to_string(),
            row.n.to_string(),
            format!("{:e}", row.l1),
            format!("{:.6}", row.kernel_seconds),
            format!("{:.6}", row.total_seconds),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Gnuplot script drawing L1 against kernel time, one curve per (variant, r).
pub fn gnuplot_script(csv_name: &str, rows: &[EfficiencyRow]) -> String {
    let mut curves: Vec<(WeightDesign, usize)> = Vec::new();
    for row in rows {
        if !curves.contains(&(row.design, row.r)) {
            curves.push((row.design, row.r));
        }
    }
    let mut s = String::from(
        "set datafile separator ','\nset logscale xy\nset xlabel 'kernel time (s)'\nset ylabel 'L1 error'\n\
         set key outside\nset terminal pngcairo size 900,600\nset output 'efficiency.png'\nplot ",
    );
    let plots: Vec<String> = curves
        .iter()
        .map(|(d, r)| {
            format!(
                "'{csv_name}' using (strcol(1) eq '{v}' && $2 == {r} ? $5 : NaN):4 with linespoints title '{v} r={r}'",
                v = d.short_name()
            )
        })
        .collect();
    s.push_str(&plots.join(", \\\n     "));
    s.push('\n');
    s
}

pub fn cmd_bench(spec: &ExperimentSpec, out: &Path, _instrument: bool) -> Result<Status> {
    std::fs::create_dir_all(out)?;
    let mut status = Status::Pass;

    let counts = op_count_report(2..=8)?;
    write_op_counts(std::fs::File::create(out.join("op_counts.csv"))?, &counts)?;
    let mismatches: Vec<_> = counts.iter().filter(|c| !c.matches()).collect();
    for m in &mismatches {
        eprintln!(
            "op-count mismatch: {} r={} s2={}: instrumented {:?} vs closed form {:?}",
            m.design, m.r, m.s2, m.instrumented, m.closed_form
        );
    }
    println!("op counts: {} rows, {} mismatches", counts.len(), mismatches.len());
    if !mismatches.is_empty() {
        status = Status::ThresholdFailed;
    }

    // timings stay on the calling thread
    let seed = spec.seed;
    for &r in &spec.r {
        let t = time_indicators(r, spec.windows, seed)?;
        println!(
            "indicators r={r}: fast {:.2} ns, JS {:.2} ns, FWENO/JS {:.2}x, FWENO/YC {:.2}x ({} windows x {})",
            t.fast * 1e9,
            t.js * 1e9,
            t.speedup_vs_js(),
            t.speedup_vs_yc(),
            t.windows,
            t.repetitions
        );
    }

    let reference = spec.reference.or(default_reference(ExperimentId::ShuOsher)).expect("shu-osher has a reference");
    let rows = efficiency_study(spec, reference, EFFICIENCY_REPEATS)?;
    let name = format!("{}_efficiency.csv", spec.experiment);
    write_efficiency(std::fs::File::create(out.join(&name))?, &rows)?;
    std::fs::write(out.join("efficiency.gp"), gnuplot_script(&name, &rows))?;
    for row in &rows {
        println!(
            "{} r={} N={}: L1 {:.4e}, kernel {:.3}s",
            row.design.short_name(),
            row.r,
            row.n,
            row.l1,
            row.kernel_seconds
        );
    }
    Ok(status)
}
