use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use fweno_cli::config::{load_config, ExperimentId, ExperimentSpec};
use fweno_cli::{bench, convergence, shock, two_d, Status};

#[derive(Parser, Debug)]
#[command(name = "fweno", version, about = "WENO experiments with fast smoothness indicators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct Common {
    /// Experiment config (flat key=value file).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for the solver (benchmark timings always use one).
    #[arg(long)]
    threads: Option<usize>,
    /// Record operation counts.
    #[arg(long)]
    instrument: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Grid-refinement study against an exact solution.
    Convergence(Common),
    /// 1D shock problems with field dumps and reference distances.
    Shock(Common),
    /// 2D Euler runs with Schlieren images.
    Run2d(Common),
    /// Op-count report, indicator timings and the efficiency study.
    Bench(Common),
}

fn expect_kind(spec: &ExperimentSpec, allowed: &[ExperimentId], command: &str) -> Result<()> {
    if !allowed.contains(&spec.experiment) {
        let names: Vec<_> = allowed.iter().map(|a| a.name()).collect();
        bail!("'{command}' runs {}; the config names '{}'", names.join(", "), spec.experiment);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Status> {
    let (common, command) = match &cli.command {
        Command::Convergence(c) => (c, "convergence"),
        Command::Shock(c) => (c, "shock"),
        Command::Run2d(c) => (c, "run2d"),
        Command::Bench(c) => (c, "bench"),
    };
    let spec = load_config(&common.config).with_context(|| format!("loading {}", common.config.display()))?;
    let threads = match (&cli.command, common.threads) {
        (Command::Bench(_), _) => Some(1),
        (_, t) => t,
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    use ExperimentId::*;
    match &cli.command {
        Command::Convergence(_) => {
            expect_kind(&spec, &[Advection, BurgersSmooth, Convergence], command)?;
            convergence::cmd_convergence(&spec, &common.out, common.instrument)
        }
        Command::Shock(_) => {
            expect_kind(&spec, &[BurgersShock, ShuOsher, Sod], command)?;
            shock::cmd_shock(&spec, &common.out, common.instrument)
        }
        Command::Run2d(_) => {
            expect_kind(&spec, &[Dmr, Riemann2d], command)?;
            two_d::cmd_2d(&spec, &common.out, common.instrument)
        }
        Command::Bench(_) => {
            expect_kind(&spec, &[BenchKernels], command)?;
            bench::cmd_bench(&spec, &common.out, common.instrument)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::ThresholdFailed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
