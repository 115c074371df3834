//! Command implementations. All output formatting lives here so the
//! binary's stdout stays byte-stable for golden-file tests.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use menuadapt_core::adapt::{
    expected_selection_time, greedy_adaptation, monte_carlo_estimate, select_adaptation,
    utility_table, BenefitMode,
};
use menuadapt_core::bundle::{BundleError, Scenario, ScenarioBundle};
use menuadapt_core::menu::MenuError;
use menuadapt_core::oracle::{naive_cost, variant_report, variant_report_csv, OracleVariant};
use menuadapt_core::sim::{interaction_cost, simulate_trace, CostParams, SimError};

use crate::{BundleArgs, Command};

/// Absolute tolerance for the oracle/simulator cross-check.
const ORACLE_TOLERANCE_MS: f64 = 1e-9;

pub enum CliError {
    /// Bad input: missing files, schema violations, unknown labels. Exit 1.
    Validation(String),
    /// A consistency check the engine itself guarantees failed. Exit 2.
    Invariant(String),
}

impl From<BundleError> for CliError {
    fn from(err: BundleError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<MenuError> for CliError {
    fn from(err: MenuError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> Self {
        CliError::Validation(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Validation(err.to_string())
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Trace {
            bundle,
            scenario,
            start,
            target,
        } => cmd_trace(&bundle, &scenario, &start, &target),
        Command::Adapt {
            bundle,
            scenario,
            mode,
            out,
        } => cmd_adapt(&bundle, &scenario, mode.as_deref(), out.as_deref()),
        Command::Compare {
            bundle,
            scenario,
            mode,
        } => cmd_compare(&bundle, &scenario, mode.as_deref()),
        Command::Sweep {
            bundle,
            t_inspect,
            t_select_correct,
            mode,
            out,
        } => cmd_sweep(
            &bundle,
            &t_inspect,
            &t_select_correct,
            &mode,
            out.as_deref(),
        ),
        Command::Verify {
            bundle,
            seed,
            samples,
            report,
        } => cmd_verify(&bundle, seed, samples, report.as_deref()),
    }
}

fn load(args: &BundleArgs) -> Result<ScenarioBundle, CliError> {
    Ok(ScenarioBundle::load(&args.bundle, args.renormalize)?)
}

fn find_scenario<'a>(bundle: &'a ScenarioBundle, name: &str) -> Result<&'a Scenario, CliError> {
    bundle.scenario(name).ok_or_else(|| {
        CliError::Validation(format!(
            "unknown scenario '{name}' (available: {})",
            bundle
                .scenarios()
                .iter()
                .map(|s| s.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })
}

fn parse_mode(text: &str) -> Result<BenefitMode, CliError> {
    BenefitMode::from_str(text).map_err(CliError::Validation)
}

fn effective_mode(scenario: &Scenario, flag: Option<&str>) -> Result<BenefitMode, CliError> {
    match flag {
        Some(text) => parse_mode(text),
        None => Ok(scenario.mode),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_trace(
    args: &BundleArgs,
    scenario_name: &str,
    start_label: &str,
    target_label: &str,
) -> Result<(), CliError> {
    let bundle = load(args)?;
    let scenario = find_scenario(&bundle, scenario_name)?;
    let tree = bundle.menu();
    let start = tree.resolve_label(start_label)?;
    let target = tree.resolve_label(target_label)?;
    let trace = simulate_trace(tree, &scenario.costs, start, target)?;
    print!("{}", trace.export(tree));
    Ok(())
}

fn cmd_adapt(
    args: &BundleArgs,
    scenario_name: &str,
    mode_flag: Option<&str>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let bundle = load(args)?;
    let scenario = find_scenario(&bundle, scenario_name)?;
    let mode = effective_mode(scenario, mode_flag)?;
    let tree = bundle.menu();
    let table = utility_table(tree, &scenario.costs, bundle.dist(), mode);
    let result = select_adaptation(&table);

    println!("scenario: {}", scenario.name);
    println!("mode: {mode}");
    println!("selected: {}", tree.label(result.selected));
    println!("utility_ms: {:.3}", result.utility_ms);
    match result.runner_up {
        Some((node, utility_ms)) => {
            println!("runner_up: {} ({utility_ms:.3})", tree.label(node));
        }
        None => println!("runner_up: none"),
    }
    println!("tie_broken: {}", result.tie_broken);

    let csv = table.to_csv(tree, result.selected);
    if out.is_none() {
        println!();
    }
    emit(out, &csv)
}

fn cmd_compare(
    args: &BundleArgs,
    scenario_name: &str,
    mode_flag: Option<&str>,
) -> Result<(), CliError> {
    let bundle = load(args)?;
    let scenario = find_scenario(&bundle, scenario_name)?;
    let mode = effective_mode(scenario, mode_flag)?;
    let tree = bundle.menu();
    let dist = bundle.dist();

    let greedy = greedy_adaptation(tree, dist);
    let utility = select_adaptation(&utility_table(tree, &scenario.costs, dist, mode)).selected;

    println!("scenario: {}", scenario.name);
    println!("mode: {mode}");
    println!("greedy_selected: {}", tree.label(greedy));
    println!(
        "greedy_expected_ms: {:.3}",
        expected_selection_time(tree, &scenario.costs, dist, greedy)
    );
    println!("utility_selected: {}", tree.label(utility));
    println!(
        "utility_expected_ms: {:.3}",
        expected_selection_time(tree, &scenario.costs, dist, utility)
    );
    println!("policies_agree: {}", greedy == utility);
    Ok(())
}

fn cmd_sweep(
    args: &BundleArgs,
    t_inspect: &[f64],
    t_select_correct: &[f64],
    mode: &str,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let modes: Vec<BenefitMode> = match mode {
        "both" => vec![BenefitMode::Literal, BenefitMode::SingleP],
        other => vec![parse_mode(other)?],
    };
    if t_inspect.is_empty() || t_select_correct.is_empty() {
        return Err(CliError::Validation("sweep grid is empty".to_string()));
    }
    let bundle = load(args)?;
    let tree = bundle.menu();

    let mut csv = String::from("t_inspect_ms,t_select_ms,t_correct_ms,mode,selected,utility_ms\n");
    for &ti in t_inspect {
        for &tsc in t_select_correct {
            let costs = CostParams::new(ti, tsc, tsc)?;
            for &mode in &modes {
                let table = utility_table(tree, &costs, bundle.dist(), mode);
                let result = select_adaptation(&table);
                writeln!(
                    csv,
                    "{ti:.3},{tsc:.3},{tsc:.3},{mode},{},{:.3}",
                    tree.label(result.selected),
                    result.utility_ms
                )
                .expect("string write");
            }
        }
    }
    emit(out, &csv)
}

fn cmd_verify(
    args: &BundleArgs,
    seed: u64,
    samples: usize,
    report: Option<&Path>,
) -> Result<(), CliError> {
    let bundle = load(args)?;
    let tree = bundle.menu();
    let dist = bundle.dist();
    let mut all_passed = true;

    // Oracle cross-check: the canonical naive transcription must reproduce
    // the simulator on every (start, target) pair under every scenario.
    for scenario in bundle.scenarios() {
        let mut pairs = 0usize;
        let mut max_dev = 0.0f64;
        for start in tree.node_ids() {
            for target in tree.leaves() {
                let naive = naive_cost(
                    tree,
                    &scenario.costs,
                    start,
                    target,
                    OracleVariant::CANONICAL,
                )
                .expect("leaf target");
                let sim =
                    interaction_cost(tree, &scenario.costs, start, target).expect("leaf target");
                max_dev = max_dev.max((naive - sim).abs());
                pairs += 1;
            }
        }
        let passed = max_dev <= ORACLE_TOLERANCE_MS;
        all_passed &= passed;
        println!(
            "oracle equivalence [{}]: {} ({pairs} pairs, max |dev| {max_dev:.3e} ms)",
            scenario.name,
            if passed { "PASS" } else { "FAIL" }
        );
    }

    // Monte Carlo consistency: the seeded sample mean must sit within three
    // standard errors of the analytic expectation for the adaptation each
    // scenario selects.
    for scenario in bundle.scenarios() {
        let table = utility_table(tree, &scenario.costs, dist, scenario.mode);
        let selected = select_adaptation(&table).selected;
        let estimate = monte_carlo_estimate(tree, &scenario.costs, dist, selected, samples, seed)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let analytic = expected_selection_time(tree, &scenario.costs, dist, selected);
        let diff = (estimate.mean_ms - analytic).abs();
        let bound = 3.0 * estimate.std_err_ms;
        let passed = diff <= bound;
        all_passed &= passed;
        println!(
            "monte carlo [{}] ({} -> {}, seed {seed}, {samples} samples): {} \
             (mean {:.3} vs analytic {:.3}, |diff| {:.3} <= {:.3})",
            scenario.name,
            scenario.mode,
            tree.label(selected),
            if passed { "PASS" } else { "FAIL" },
            estimate.mean_ms,
            analytic,
            diff,
            bound
        );
    }

    if let Some(path) = report {
        let mut rows = Vec::new();
        for scenario in bundle.scenarios() {
            rows.extend(variant_report(
                tree,
                &scenario.costs,
                dist,
                scenario.mode,
                &scenario.name,
            ));
        }
        fs::write(path, variant_report_csv(tree, &rows))?;
        println!("variant report: {}", path.display());
    }

    println!("result: {}", if all_passed { "PASS" } else { "FAIL" });
    if all_passed {
        Ok(())
    } else {
        Err(CliError::Invariant(
            "one or more verification checks failed".to_string(),
        ))
    }
}
