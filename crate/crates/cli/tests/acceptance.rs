//! Acceptance suite: every release criterion as one test, each printing a
//! PASS line with its measured runtime.
//!
//! Run with `cargo test -p menuadapt-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use menuadapt_core::adapt::{
    expected_selection_time, greedy_adaptation, monte_carlo_estimate, select_adaptation,
    utility_table, BenefitMode,
};
use menuadapt_core::menu::TargetDistribution;
use menuadapt_core::oracle::{naive_cost, OracleVariant};
use menuadapt_core::sim::{
    action_counts, interaction_cost, simulate_trace, ActionKind, CostParams,
};
use menuadapt_core::synth::{random_costs, random_distribution, random_tree};
use menuadapt_core::ScenarioBundle;
use rand::seq::IteratorRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/walkthrough.json")
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_menuadapt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn pass(criterion: &str, detail: &str, elapsed: Duration, budget: Duration) {
    assert!(
        elapsed <= budget,
        "{criterion}: took {elapsed:?}, budget {budget:?}"
    );
    println!("{criterion}: PASS ({detail}, {elapsed:?})");
}

#[test]
fn c1_walkthrough_path_reproduction() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();
    let costs = bundle.scenario("scenario1").unwrap().costs;
    let start = tree.node_by_label("Music").unwrap();
    let target = tree.node_by_label("Top 50").unwrap();

    let clock = Instant::now();
    let trace = simulate_trace(tree, &costs, start, target).unwrap();
    let elapsed = clock.elapsed();

    assert_eq!(trace.count(ActionKind::Correct), 2);
    assert_eq!(trace.count(ActionKind::Select), 3);
    pass(
        "criterion 1 (Music -> Top 50 path)",
        "2 corrections, 3 selections",
        elapsed,
        Duration::from_millis(1),
    );
}

#[test]
fn c2_scenario_winners_under_one_mode() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();
    let s1 = bundle.scenario("scenario1").unwrap();
    let s2 = bundle.scenario("scenario2").unwrap();
    // Both scenarios must reproduce their winner under the SAME documented
    // mode; the fixture records single-p for both.
    assert_eq!(s1.mode, s2.mode);
    assert_eq!(s1.mode, BenefitMode::SingleP);

    let clock = Instant::now();
    let pick1 = select_adaptation(&utility_table(tree, &s1.costs, bundle.dist(), s1.mode)).selected;
    let pick2 = select_adaptation(&utility_table(tree, &s2.costs, bundle.dist(), s2.mode)).selected;
    let elapsed = clock.elapsed();

    assert_eq!(tree.label(pick1), "Electronic");
    assert_eq!(tree.label(pick2), "Entertainment");
    pass(
        "criterion 2 (scenario winners)",
        "scenario1 -> Electronic, scenario2 -> Entertainment, mode single-p",
        elapsed,
        Duration::from_millis(10),
    );
}

#[test]
fn c3_sweep_grid_contains_a_listen_point() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();
    let grid_inspect = [500.0, 1000.0, 1500.0, 2000.0, 2500.0, 3000.0];
    let grid_select_correct = [500.0, 1000.0, 1500.0];

    let clock = Instant::now();
    let mut listen_points = Vec::new();
    for &ti in &grid_inspect {
        for &tsc in &grid_select_correct {
            let costs = CostParams::new(ti, tsc, tsc).unwrap();
            let table = utility_table(tree, &costs, bundle.dist(), BenefitMode::SingleP);
            let selected = select_adaptation(&table).selected;
            if tree.label(selected) == "Listen" {
                listen_points.push((ti, tsc));
            }
        }
    }
    let elapsed = clock.elapsed();

    assert!(
        !listen_points.is_empty(),
        "no grid point selected Listen under single-p"
    );
    pass(
        "criterion 3 (sweep selects Listen)",
        &format!("{} of 18 grid points", listen_points.len()),
        elapsed,
        Duration::from_secs(1),
    );
}

#[test]
fn c4_greedy_contrast() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();

    let clock = Instant::now();
    for scenario in bundle.scenarios() {
        // Greedy ignores costs entirely, so every scenario agrees.
        let greedy = greedy_adaptation(tree, bundle.dist());
        assert_eq!(
            tree.label(greedy),
            "Electronic",
            "scenario {}",
            scenario.name
        );
    }
    let s2 = bundle.scenario("scenario2").unwrap();
    let utility_pick =
        select_adaptation(&utility_table(tree, &s2.costs, bundle.dist(), s2.mode)).selected;
    let greedy_pick = greedy_adaptation(tree, bundle.dist());
    let elapsed = clock.elapsed();

    assert_ne!(utility_pick, greedy_pick);
    assert_eq!(tree.label(utility_pick), "Entertainment");
    pass(
        "criterion 4 (greedy contrast)",
        "greedy always Electronic; differs from utility pick in scenario2",
        elapsed,
        Duration::from_secs(1),
    );
}

#[test]
fn c5_oracle_equivalence() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();

    let clock = Instant::now();
    let mut fixture_pairs = 0usize;
    for scenario in bundle.scenarios() {
        for start in tree.node_ids() {
            for target in tree.leaves() {
                let naive = naive_cost(
                    tree,
                    &scenario.costs,
                    start,
                    target,
                    OracleVariant::CANONICAL,
                )
                .unwrap();
                let sim = interaction_cost(tree, &scenario.costs, start, target).unwrap();
                assert!(
                    (naive - sim).abs() <= 1e-9,
                    "fixture pair ({}, {}): {naive} vs {sim}",
                    tree.label(start),
                    tree.label(target)
                );
                fixture_pairs += 1;
            }
        }
    }
    assert_eq!(fixture_pairs, 2 * 228);

    let mut rng = ChaCha8Rng::seed_from_u64(0x0E5A11);
    let mut random_pairs = 0usize;
    for _ in 0..1000 {
        let tree = random_tree(&mut rng, 1, 50);
        let costs = random_costs(&mut rng, 0.0, 5000.0);
        for start in tree.node_ids() {
            for target in tree.leaves() {
                let naive =
                    naive_cost(&tree, &costs, start, target, OracleVariant::CANONICAL).unwrap();
                let sim = interaction_cost(&tree, &costs, start, target).unwrap();
                assert!(
                    (naive - sim).abs() <= 1e-9,
                    "random tree pair deviates: {naive} vs {sim}"
                );
                random_pairs += 1;
            }
        }
    }
    let elapsed = clock.elapsed();

    pass(
        "criterion 5 (oracle equivalence)",
        &format!("456 fixture pairs + {random_pairs} random-tree pairs within 1e-9 ms"),
        elapsed,
        Duration::from_secs(10),
    );
}

#[test]
fn c6_property_suite() {
    let clock = Instant::now();

    // (a) Argmin scale invariance.
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11);
    for _ in 0..100 {
        let tree = random_tree(&mut rng, 1, 40);
        let dist = random_distribution(&mut rng, &tree);
        let costs = random_costs(&mut rng, 0.0, 5000.0);
        let factor: f64 = rng.random_range(0.001..1000.0);
        let mode = if rng.random_bool(0.5) {
            BenefitMode::SingleP
        } else {
            BenefitMode::Literal
        };
        let base = select_adaptation(&utility_table(&tree, &costs, &dist, mode)).selected;
        let scaled =
            select_adaptation(&utility_table(&tree, &costs.scaled(factor), &dist, mode)).selected;
        assert_eq!(base, scaled, "argmin changed under scaling by {factor}");
    }

    // (b) Degenerate-distribution optimality in single-p mode.
    let mut rng = ChaCha8Rng::seed_from_u64(0xB22);
    for _ in 0..100 {
        let tree = random_tree(&mut rng, 2, 60);
        let target = tree.leaves().choose(&mut rng).unwrap();
        let dist = TargetDistribution::degenerate(&tree, target).unwrap();
        let costs = random_costs(&mut rng, 1.0, 5000.0);
        let pick =
            select_adaptation(&utility_table(&tree, &costs, &dist, BenefitMode::SingleP)).selected;
        assert_eq!(
            pick, target,
            "degenerate distribution must select its target"
        );
    }

    // (c) Cost linearity: counts repriced under fresh cost vectors.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC33);
    for _ in 0..100 {
        let tree = random_tree(&mut rng, 1, 60);
        let start = tree.node_ids().choose(&mut rng).unwrap();
        let target = tree.leaves().choose(&mut rng).unwrap();
        let counts = action_counts(&tree, start, target).unwrap();
        for _ in 0..3 {
            let costs = random_costs(&mut rng, 0.0, 5000.0);
            let repriced = counts.price(&costs);
            let direct = interaction_cost(&tree, &costs, start, target).unwrap();
            assert!(
                (repriced - direct).abs() <= 1e-9,
                "linearity violated: {repriced} vs {direct}"
            );
        }
    }

    // (d) Monotonicity in each cost parameter.
    let mut rng = ChaCha8Rng::seed_from_u64(0xD44);
    for _ in 0..100 {
        let tree = random_tree(&mut rng, 1, 60);
        let start = tree.node_ids().choose(&mut rng).unwrap();
        let target = tree.leaves().choose(&mut rng).unwrap();
        let costs = random_costs(&mut rng, 0.0, 5000.0);
        let base = interaction_cost(&tree, &costs, start, target).unwrap();
        let bump: f64 = rng.random_range(0.0..2500.0);
        for which in 0..3 {
            let mut bumped = costs;
            match which {
                0 => bumped.t_inspect_ms += bump,
                1 => bumped.t_select_ms += bump,
                _ => bumped.t_correct_ms += bump,
            }
            let cost = interaction_cost(&tree, &bumped, start, target).unwrap();
            assert!(cost >= base, "cost decreased when a parameter grew");
        }
    }

    let elapsed = clock.elapsed();
    pass(
        "criterion 6 (property suite)",
        "scale invariance, degenerate optimality, linearity, monotonicity x100",
        elapsed,
        Duration::from_secs(30),
    );
}

#[test]
fn c7_monte_carlo_consistency() {
    let bundle = ScenarioBundle::walkthrough();
    let tree = bundle.menu();
    let costs = bundle.scenario("scenario1").unwrap().costs;
    let adaptation = tree.node_by_label("Electronic").unwrap();

    let clock = Instant::now();
    let estimate =
        monte_carlo_estimate(tree, &costs, bundle.dist(), adaptation, 100_000, 42).unwrap();
    let elapsed = clock.elapsed();

    let analytic = expected_selection_time(tree, &costs, bundle.dist(), adaptation);
    let diff = (estimate.mean_ms - analytic).abs();
    let bound = 3.0 * estimate.std_err_ms;
    assert!(estimate.std_err_ms > 0.0);
    assert!(
        diff <= bound,
        "Monte Carlo mean {} vs analytic {analytic}: |diff| {diff} > {bound}",
        estimate.mean_ms
    );
    pass(
        "criterion 7 (Monte Carlo consistency)",
        &format!(
            "mean {:.3} vs analytic {analytic:.3}, |diff| {diff:.3} <= {bound:.3}",
            estimate.mean_ms
        ),
        elapsed,
        Duration::from_secs(5),
    );
}

#[test]
fn c8_round_trip_and_golden_files() {
    let clock = Instant::now();

    // Bundle load -> serialize -> load is the identity, and the shipped
    // fixture is already in canonical form.
    let bundle = ScenarioBundle::walkthrough();
    let text = bundle.to_json_string();
    let reloaded = ScenarioBundle::from_json_str(&text, false).unwrap();
    assert_eq!(reloaded, bundle);
    assert_eq!(reloaded.to_json_string(), text);
    let fixture_bytes = std::fs::read_to_string(fixture_path()).unwrap();
    assert_eq!(text, fixture_bytes);

    // CLI outputs byte-match the committed golden files.
    let fixture = fixture_path();
    let fixture = fixture.to_str().unwrap();
    let cases: [(&str, Vec<&str>); 3] = [
        (
            "trace_scenario1_music_top50.txt",
            vec![
                "trace",
                "--bundle",
                fixture,
                "--scenario",
                "scenario1",
                "Music",
                "Top 50",
            ],
        ),
        (
            "adapt_scenario1.txt",
            vec!["adapt", "--bundle", fixture, "--scenario", "scenario1"],
        ),
        (
            "adapt_scenario2.txt",
            vec!["adapt", "--bundle", fixture, "--scenario", "scenario2"],
        ),
    ];
    for (golden, args) in cases {
        let output = run_cli(&args);
        assert!(output.status.success(), "{args:?} failed");
        let expected = std::fs::read(golden_path(golden)).unwrap();
        assert_eq!(
            output.stdout, expected,
            "stdout of {args:?} does not match {golden}"
        );
    }

    let elapsed = clock.elapsed();
    pass(
        "criterion 8 (round-trip and golden files)",
        "bundle round-trip identity; trace/adapt outputs byte-match goldens",
        elapsed,
        Duration::from_secs(10),
    );
}

/// Rewrites the golden files from the current binary output. Run with
/// `cargo test -p menuadapt-cli --test acceptance regenerate -- --ignored`
/// after an intentional output format change.
#[test]
#[ignore = "rewrites the golden files in place"]
fn regenerate_golden_files() {
    let fixture = fixture_path();
    let fixture = fixture.to_str().unwrap();
    let cases: [(&str, Vec<&str>); 3] = [
        (
            "trace_scenario1_music_top50.txt",
            vec![
                "trace",
                "--bundle",
                fixture,
                "--scenario",
                "scenario1",
                "Music",
                "Top 50",
            ],
        ),
        (
            "adapt_scenario1.txt",
            vec!["adapt", "--bundle", fixture, "--scenario", "scenario1"],
        ),
        (
            "adapt_scenario2.txt",
            vec!["adapt", "--bundle", fixture, "--scenario", "scenario2"],
        ),
    ];
    for (golden, args) in cases {
        let output = run_cli(&args);
        assert!(output.status.success());
        std::fs::write(golden_path(golden), output.stdout).unwrap();
    }
}
