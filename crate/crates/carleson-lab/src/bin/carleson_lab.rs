//! Scenario runner CLI: one subcommand per experiment kind, JSON config
//! in, CSV reports plus a JSON manifest out.
//!
//! Exit codes: 0 when every contract in the scenario passes, 1 on a
//! contract failure (witness rows land in the CSVs), 2 on config or I/O
//! errors.

use carleson_lab::scenario::{run_scenario, KINDS};
use carleson_lab::Error;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "carleson-lab", version, about = "Numerical laboratory for Carleson-operator objects")]
struct Cli {
    /// List the available scenario kinds and exit
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario configuration (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Output directory for reports
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the seed from the config
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for internally parallel sweeps
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Partial-sum convergence scan or exceptional-set measurement
    FourierConvergence(RunArgs),
    /// Kernel bound and identity sweeps
    KernelSweep(RunArgs),
    /// Restricted weak-type experiment for the Carleson operator
    WeakType(RunArgs),
    /// Calderón–Zygmund decomposition invariants
    Cz(RunArgs),
    /// Dyadic grid construction and axiom verification
    GridBuild(RunArgs),
    /// Tile structure construction and axiom verification
    TileBuild(RunArgs),
    /// Forest verifier against the constructed fixture and its mutations
    ForestCheck(RunArgs),
    /// Oscillatory integral bound sweeps
    VdcSweep(RunArgs),
    /// Pointwise Cotlar-type domination sweep
    Cotlar(RunArgs),
    /// Weak (1,1) level-set experiment for truncated operators
    Weak11(RunArgs),
}

impl Command {
    fn kind(&self) -> &'static str {
        match self {
            Command::FourierConvergence(_) => "fourier_convergence",
            Command::KernelSweep(_) => "kernel_sweep",
            Command::WeakType(_) => "weak_type",
            Command::Cz(_) => "cz",
            Command::GridBuild(_) => "grid_build",
            Command::TileBuild(_) => "tile_build",
            Command::ForestCheck(_) => "forest_check",
            Command::VdcSweep(_) => "vdc_sweep",
            Command::Cotlar(_) => "cotlar",
            Command::Weak11(_) => "weak11",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::FourierConvergence(a)
            | Command::KernelSweep(a)
            | Command::WeakType(a)
            | Command::Cz(a)
            | Command::GridBuild(a)
            | Command::TileBuild(a)
            | Command::ForestCheck(a)
            | Command::VdcSweep(a)
            | Command::Cotlar(a)
            | Command::Weak11(a) => a,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        for k in KINDS {
            println!("{k}");
        }
        return ExitCode::SUCCESS;
    }
    let Some(cmd) = cli.command else {
        eprintln!("no subcommand given; try --list or --help");
        return ExitCode::from(2);
    };
    let args = cmd.args();

    // the config must agree with the subcommand
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(2);
        }
    };
    let declared_kind = serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v.get("kind").and_then(|k| k.as_str().map(String::from)));
    if let Some(k) = declared_kind {
        if k != cmd.kind() {
            eprintln!("config declares kind {k:?} but subcommand is {}", cmd.kind());
            return ExitCode::from(2);
        }
    } else {
        eprintln!("config is missing a valid \"kind\" field");
        return ExitCode::from(2);
    }

    match run_scenario(&args.config, &args.out, args.seed, args.jobs) {
        Ok(outcome) => {
            for f in &outcome.outputs {
                println!("wrote {}", f.display());
            }
            if outcome.pass {
                println!("PASS");
                ExitCode::SUCCESS
            } else {
                println!("FAIL (see witness rows in the reports)");
                ExitCode::from(1)
            }
        }
        Err(e @ (Error::Parse(_) | Error::Io(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
