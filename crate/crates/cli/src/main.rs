//! `menuadapt`: inspect, select, and verify menu adaptations from the
//! command line.
//!
//! Every command reads a scenario bundle (menu + target distribution +
//! named cost sets) and writes deterministic text: identical invocations
//! produce byte-identical output. Exit codes: 0 on success, 1 on input or
//! validation failures, 2 when an internal invariant check fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

use commands::CliError;

#[derive(Parser)]
#[command(
    name = "menuadapt",
    version,
    about = "Expected-time optimal starting points for hierarchical menus"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BundleArgs {
    /// Path to the scenario bundle JSON file.
    #[arg(long)]
    bundle: PathBuf,
    /// Rescale the distribution to sum to 1 instead of rejecting it.
    #[arg(long)]
    renormalize: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the simulated action trace from a start item to a target leaf.
    Trace {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Scenario whose costs price the trace.
        #[arg(long)]
        scenario: String,
        /// Label of the starting item (quote labels containing spaces).
        start: String,
        /// Label of the target leaf.
        target: String,
    },
    /// Select the utility-minimizing adaptation and emit the full table.
    Adapt {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        scenario: String,
        /// Override the scenario's benefit mode: 'literal' or 'single-p'.
        #[arg(long)]
        mode: Option<String>,
        /// Write the utility table CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contrast the greedy policy with the utility-based selection.
    Compare {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        scenario: String,
        /// Override the scenario's benefit mode: 'literal' or 'single-p'.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Sweep a cost grid and report the selected adaptation per point.
    Sweep {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Inspection costs to sweep, comma separated (ms).
        #[arg(
            long = "t-inspect",
            value_delimiter = ',',
            num_args = 1..,
            allow_negative_numbers = true,
            default_values_t = [500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0]
        )]
        t_inspect: Vec<f64>,
        /// Joint selection/correction costs to sweep, comma separated (ms).
        #[arg(
            long = "t-select-correct",
            value_delimiter = ',',
            num_args = 1..,
            allow_negative_numbers = true,
            default_values_t = [500.0, 1000.0, 1500.0]
        )]
        t_select_correct: Vec<f64>,
        /// 'literal', 'single-p', or 'both'.
        #[arg(long, default_value = "both")]
        mode: String,
        /// Write the sweep CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the simulator against the naive oracle and the analytic
    /// expectation against a seeded Monte Carlo run.
    Verify {
        #[command(flatten)]
        bundle: BundleArgs,
        /// Seed for the Monte Carlo generator.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Monte Carlo sample count.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Write the oracle variant comparison CSV here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// Process exit statuses. Invariant violations (for example an oracle
/// mismatch reported by `verify`) always exit 2.
#[derive(Clone, Copy)]
#[repr(u8)]
enum ExitStatus {
    Success = 0,
    ValidationFailure = 1,
    InvariantViolation = 2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match commands::run(cli.command) {
        Ok(()) => ExitStatus::Success,
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            ExitStatus::ValidationFailure
        }
        Err(CliError::Invariant(message)) => {
            eprintln!("error: {message}");
            ExitStatus::InvariantViolation
        }
    };
    ExitCode::from(status as u8)
}
