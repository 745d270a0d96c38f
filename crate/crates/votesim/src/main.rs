use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use votesim::config::{parse_config, Mode, RunSpec};
use votesim::output::{write_sweep_csv, write_trace};
use votesim::parallel::sweep_parallel;
use votesim_core::{find_optimum, run_game};

/// Simulator of capital dynamics under voting in a stochastic environment:
/// egoist and altruist agents, ruin, and Monte Carlo sweeps over the altruist
/// count and the support-screen size.
#[derive(Parser)]
#[command(name = "votesim", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonFlags {
    /// Configuration file (flat `key = value` lines); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Replications per grid cell.
    #[arg(long)]
    replications: Option<u32>,
    /// Worker thread count for sweeps.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single game and print survival statistics.
    Run {
        #[command(flatten)]
        common: CommonFlags,
        /// Record a per-step trace and write it to --out.
        #[arg(long)]
        trace: bool,
    },
    /// Sweep the (altruist_count, support_size) grid and write a CSV surface.
    Sweep {
        #[command(flatten)]
        common: CommonFlags,
    },
}

fn load_spec(common: &CommonFlags, mode: Mode) -> Result<RunSpec> {
    let mut spec = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => RunSpec::default(),
    };
    spec.mode = mode;
    if let Some(out) = &common.out {
        spec.output_path = Some(out.clone());
    }
    if let Some(seed) = common.seed {
        spec.master_seed = votesim_core::RngSeed(seed);
    }
    if let Some(replications) = common.replications {
        spec.replications = replications;
    }
    if let Some(workers) = common.workers {
        spec.workers = workers;
    }
    spec.validate()?;
    Ok(spec)
}

fn run_single(spec: &RunSpec) -> Result<()> {
    let record_trace = spec.mode == Mode::Trace;
    let result = run_game(&spec.config, spec.master_seed, record_trace)?;
    if record_trace {
        let Some(path) = &spec.output_path else {
            bail!("trace requested but no output path given; pass --out");
        };
        write_trace(&result, path)?;
        eprintln!("trace written to {}", path.display());
    }
    println!("survival_fraction = {}", result.survival_fraction);
    println!("survivors_total = {}", result.survivors_total);
    println!("survivors_egoist = {}", result.survivors_by_strategy.egoist);
    println!("survivors_altruist = {}", result.survivors_by_strategy.altruist);
    println!("accepted_count = {}", result.accepted_count);
    Ok(())
}

fn run_sweep(spec: &RunSpec) -> Result<()> {
    let Some(path) = &spec.output_path else {
        bail!("sweep needs an output path; pass --out or set `out` in the config");
    };
    let result = sweep_parallel(
        &spec.config,
        &spec.altruist_counts,
        &spec.support_sizes,
        spec.replications,
        spec.master_seed,
        spec.workers,
    )?;
    write_sweep_csv(&result, spec, path)?;
    let optimum = find_optimum(&result);
    println!(
        "best cell: altruist_count = {}, n0 = {}, mean_survival = {} (stderr {})",
        optimum.best.altruist_count,
        optimum.best.support_size,
        optimum.best.mean_survival,
        optimum.best.stderr_survival,
    );
    println!("plateau cells within one stderr of best: {}", optimum.plateau.len());
    println!("sweep written to {}", path.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { common, trace } => {
            let mode = if trace { Mode::Trace } else { Mode::Run };
            let spec = load_spec(&common, mode)?;
            run_single(&spec)
        }
        Command::Sweep { common } => {
            let spec = load_spec(&common, Mode::Sweep)?;
            run_sweep(&spec)
        }
    }
}
