//! Command-line entry point. Exit codes: 0 on success, 2 for configuration
//! errors, 3 when a region invariant is violated.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use irs_regions::config::{parse_seed_list, ScenarioConfig};
use irs_regions::runners::{
    run_bc_regions, run_common_rate_sweep, run_element_allocation_sweep, run_mac_regions,
    run_validate, InvariantViolation,
};

#[derive(Parser)]
#[command(
    name = "irs-regions",
    about = "Rate-region experiments for reflecting-surface-aided two-user links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario configuration file (JSON). Required for every subcommand
    /// except `validate`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV/JSON/SVG artifacts.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Seed override: comma-separated values or inclusive ranges, e.g.
    /// `0-49,100`.
    #[arg(long, global = true)]
    seeds: Option<String>,
    /// Worker-thread cap; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Uplink multiple-access region bundles per seed.
    MacRegions,
    /// Downlink broadcast region bundles per seed.
    BcRegions,
    /// Max common rate versus the second user's distance.
    CommonRate,
    /// Distributed element allocation sweep over the second surface size.
    ElementSweep,
    /// Run the built-in oracle and property suite on small instances.
    Validate,
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig> {
    let path = cli
        .config
        .as_deref()
        .context("--config is required for this subcommand")?;
    let mut cfg = ScenarioConfig::load(path)?;
    if let Some(spec) = &cli.seeds {
        cfg.seeds = parse_seed_list(spec)?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::MacRegions => run_mac_regions(&load_config(cli)?, &cli.out_dir),
        Command::BcRegions => run_bc_regions(&load_config(cli)?, &cli.out_dir),
        Command::CommonRate => run_common_rate_sweep(&load_config(cli)?, &cli.out_dir),
        Command::ElementSweep => run_element_allocation_sweep(&load_config(cli)?, &cli.out_dir),
        Command::Validate => run_validate(360),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<InvariantViolation>().is_some() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
