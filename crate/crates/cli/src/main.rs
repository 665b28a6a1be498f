use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use degenlab::harness::{parse_config, run_and_emit, Scenario};

#[derive(Parser)]
#[command(
    name = "degenlab",
    version,
    about = "Verification runs for the degenerate thin-film operator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// `key = value` configuration file
    #[arg(long)]
    config: PathBuf,
    /// Output directory for report.json, CSV tables and snapshots
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form kernel and admissibility audit
    Remark11(RunArgs),
    /// Manufactured-solution convergence study
    Manufactured(RunArgs),
    /// Polynomial-in-time forcing reproduces b + a t
    #[command(name = "liouville-t")]
    LiouvilleT(RunArgs),
    /// Zero data stays zero
    Uniqueness(RunArgs),
    /// Hardy, interpolation, cutoff, mollifier, iteration and Caccioppoli checks
    Estimates(RunArgs),
}

fn run(scenario: Scenario, args: &RunArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&args.config).with_context(|| format!("reading {}", args.config.display()))?;
    let config = parse_config(&text).with_context(|| format!("parsing {}", args.config.display()))?;
    if config.scenario != scenario {
        bail!(
            "{} configures scenario `{}`, not `{}`",
            args.config.display(),
            config.scenario,
            scenario
        );
    }
    let result = run_and_emit(&config, &args.out)?;
    for name in &result.failures {
        eprintln!("FAILED {name}");
    }
    println!(
        "{} {} in {:.2}s -> {}",
        scenario,
        if result.pass { "pass" } else { "fail" },
        result.duration.as_secs_f64(),
        result.report_path.display()
    );
    Ok(result.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    degenlab::exec::init_from_env();
    let (scenario, args) = match &cli.command {
        Command::Remark11(a) => (Scenario::Remark11, a),
        Command::Manufactured(a) => (Scenario::Manufactured, a),
        Command::LiouvilleT(a) => (Scenario::LiouvilleT, a),
        Command::Uniqueness(a) => (Scenario::Uniqueness, a),
        Command::Estimates(a) => (Scenario::Estimates, a),
    };
    match run(scenario, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
