//! Utility of candidate adaptations and selection of the best one.
//!
//! Every node of the menu (root, sub-menus, and leaves alike) is a
//! candidate starting point. A candidate's utility is its expected
//! interaction time over the target distribution minus a benefit credit for
//! the search work the adaptation saves; lower is better. A greedy baseline
//! that only looks at probabilities is provided for comparison, along with
//! a seeded Monte Carlo estimator that cross-checks the analytic
//! expectation.

use std::fmt;
use std::str::FromStr;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::menu::{MenuTree, NodeId, TargetDistribution};
use crate::sim::{interaction_cost, root_search_cost, CostParams};

/// Two utilities within this absolute distance count as tied and fall
/// through to the structural tie-break rules.
pub const TIE_TOLERANCE_MS: f64 = 1e-9;

/// How the benefit credit enters the utility.
///
/// With `Benefit(k) = p_k · T(0,k)` (probability-weighted cost of reaching
/// `k` from the root), the two modes subtract either `p_k · Benefit(k)` or
/// `Benefit(k)` from the expected cost. `SingleP` is the default and the
/// accounting under which the bundled walkthrough fixture selects
/// Electronic, Entertainment, and Listen across its three cost regimes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub enum BenefitMode {
    /// Subtract `p_k² · T(0,k)`: the benefit term is weighted by the
    /// candidate's probability a second time.
    #[serde(rename = "literal")]
    Literal,
    /// Subtract `p_k · T(0,k)`: the benefit enters once.
    #[default]
    #[serde(rename = "single-p")]
    SingleP,
}

impl fmt::Display for BenefitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenefitMode::Literal => "literal",
            BenefitMode::SingleP => "single-p",
        })
    }
}

impl FromStr for BenefitMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(BenefitMode::Literal),
            "single-p" => Ok(BenefitMode::SingleP),
            other => Err(format!(
                "unknown benefit mode '{other}' (expected 'literal' or 'single-p')"
            )),
        }
    }
}

#[derive(Error, Debug)]
pub enum AdaptationError {
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("distribution has no positive mass to sample from")]
    ZeroMassDistribution,
}

/// Per-candidate utility breakdown.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct UtilityEntry {
    pub node: NodeId,
    pub depth: usize,
    /// Subtree probability mass of the candidate.
    pub mass: f64,
    /// Expected interaction time when starting here, over all targets.
    pub expected_cost_ms: f64,
    /// `mass · T(0, node)`: the probability-weighted root search cost this
    /// adaptation saves.
    pub benefit_ms: f64,
    pub utility_ms: f64,
}

/// Utility of every node in the tree, in pre-order.
#[derive(Clone, PartialEq, Debug)]
pub struct UtilityTable {
    entries: Vec<UtilityEntry>,
    mode: BenefitMode,
    costs: CostParams,
}

impl UtilityTable {
    pub fn entries(&self) -> &[UtilityEntry] {
        &self.entries
    }

    pub fn entry(&self, node: NodeId) -> Option<&UtilityEntry> {
        self.entries.get(node.index())
    }

    pub fn mode(&self) -> BenefitMode {
        self.mode
    }

    pub fn costs(&self) -> &CostParams {
        &self.costs
    }

    /// CSV export: header
    /// `node,depth,p,expected_cost_ms,benefit_ms,utility_ms,selected`,
    /// one row per node in pre-order, `selected` = 1 on exactly one row.
    pub fn to_csv(&self, tree: &MenuTree, selected: NodeId) -> String {
        use fmt::Write;
        let mut out =
            String::from("node,depth,p,expected_cost_ms,benefit_ms,utility_ms,selected\n");
        for entry in &self.entries {
            writeln!(
                out,
                "{},{},{:.3},{:.3},{:.3},{:.3},{}",
                tree.label(entry.node),
                entry.depth,
                entry.mass,
                entry.expected_cost_ms,
                entry.benefit_ms,
                entry.utility_ms,
                u8::from(entry.node == selected)
            )
            .expect("string write");
        }
        out
    }
}

/// Outcome of minimizing utility over the table.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct AdaptationResult {
    pub selected: NodeId,
    pub utility_ms: f64,
    /// True when other candidates tied within [`TIE_TOLERANCE_MS`] and the
    /// structural rules (shallower depth, earlier pre-order) decided.
    pub tie_broken: bool,
    /// Best remaining candidate and its utility, if the table has more than
    /// one entry.
    pub runner_up: Option<(NodeId, f64)>,
}

/// Benefit of adapting to `node`: its subtree mass times the root search
/// cost it spares the user. Zero for the root and for zero-mass candidates.
pub fn benefit(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    node: NodeId,
) -> f64 {
    dist.subtree_mass(tree, node) * root_search_cost(tree, costs, node)
}

/// Expected interaction time when the adaptation shows `start`, over all
/// targets weighted by the distribution.
pub fn expected_selection_time(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    start: NodeId,
) -> f64 {
    dist.iter()
        .map(|(leaf, p)| {
            p * interaction_cost(tree, costs, start, leaf).expect("distribution keys are leaves")
        })
        .sum()
}

/// Utility of a single candidate under the given benefit accounting.
pub fn utility(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    node: NodeId,
    mode: BenefitMode,
) -> f64 {
    let expected = expected_selection_time(tree, costs, dist, node);
    let credit = benefit(tree, costs, dist, node);
    match mode {
        BenefitMode::Literal => expected - dist.subtree_mass(tree, node) * credit,
        BenefitMode::SingleP => expected - credit,
    }
}

/// Utility of every node, with the per-target cost supplied by `cost_fn`.
/// Used to evaluate the table under alternative cost accounting (see
/// [`crate::oracle`]).
pub(crate) fn utility_table_with(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    mode: BenefitMode,
    cost_fn: impl Fn(NodeId, NodeId) -> f64,
) -> UtilityTable {
    let entries = tree
        .node_ids()
        .map(|node| {
            let expected_cost_ms: f64 = dist.iter().map(|(leaf, p)| p * cost_fn(node, leaf)).sum();
            let mass = dist.subtree_mass(tree, node);
            let benefit_ms = mass * root_search_cost(tree, costs, node);
            let utility_ms = match mode {
                BenefitMode::Literal => expected_cost_ms - mass * benefit_ms,
                BenefitMode::SingleP => expected_cost_ms - benefit_ms,
            };
            UtilityEntry {
                node,
                depth: tree.depth(node),
                mass,
                expected_cost_ms,
                benefit_ms,
                utility_ms,
            }
        })
        .collect();
    UtilityTable {
        entries,
        mode,
        costs: *costs,
    }
}

/// Utility of every node under the canonical interaction cost.
pub fn utility_table(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    mode: BenefitMode,
) -> UtilityTable {
    utility_table_with(tree, costs, dist, mode, |start, leaf| {
        interaction_cost(tree, costs, start, leaf).expect("distribution keys are leaves")
    })
}

/// Minimizes utility over the table. Ties within [`TIE_TOLERANCE_MS`] fall
/// back to smaller depth, then earlier pre-order position.
pub fn select_adaptation(table: &UtilityTable) -> AdaptationResult {
    let entries = table.entries();
    assert!(!entries.is_empty(), "utility table has no entries");

    let min_utility = entries
        .iter()
        .map(|e| e.utility_ms)
        .fold(f64::INFINITY, f64::min);
    let mut tied = 0usize;
    let mut best: Option<&UtilityEntry> = None;
    for entry in entries {
        if entry.utility_ms - min_utility <= TIE_TOLERANCE_MS {
            tied += 1;
            // Pre-order iteration makes "earlier position" the natural
            // winner of exact (depth) ties.
            if best.is_none_or(|b| entry.depth < b.depth) {
                best = Some(entry);
            }
        }
    }
    let best = best.expect("table is non-empty");

    let runner_up = entries
        .iter()
        .filter(|e| e.node != best.node)
        .min_by(|a, b| {
            a.utility_ms
                .total_cmp(&b.utility_ms)
                .then(a.depth.cmp(&b.depth))
                .then(a.node.cmp(&b.node))
        })
        .map(|e| (e.node, e.utility_ms));

    AdaptationResult {
        selected: best.node,
        utility_ms: best.utility_ms,
        tie_broken: tied > 1,
        runner_up,
    }
}

/// Baseline policy: the highest-probability leaf, ignoring interaction
/// costs entirely. Ties go to the earlier pre-order leaf.
pub fn greedy_adaptation(tree: &MenuTree, dist: &TargetDistribution) -> NodeId {
    let mut best: Option<(NodeId, f64)> = None;
    for leaf in tree.leaves() {
        let p = dist.leaf_mass(leaf).unwrap_or(0.0);
        match best {
            Some((_, best_p)) if p <= best_p => {}
            _ => best = Some((leaf, p)),
        }
    }
    best.expect("tree has at least one leaf").0
}

/// Seeded Monte Carlo estimate of the expected selection time.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MonteCarloEstimate {
    pub mean_ms: f64,
    pub std_dev_ms: f64,
    pub std_err_ms: f64,
    pub samples: usize,
}

/// Draws `samples` targets i.i.d. from the distribution with a
/// deterministic generator seeded by `seed`, simulates each acquisition
/// from `adaptation`, and returns the sample statistics of the cost.
pub fn monte_carlo_estimate(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    adaptation: NodeId,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate, AdaptationError> {
    if samples == 0 {
        return Err(AdaptationError::NoSamples);
    }
    let (leaves, weights): (Vec<NodeId>, Vec<f64>) = dist.iter().unzip();
    let index = WeightedIndex::new(&weights).map_err(|_| AdaptationError::ZeroMassDistribution)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Welford running mean/variance.
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for n in 1..=samples {
        let target = leaves[index.sample(&mut rng)];
        let cost = interaction_cost(tree, costs, adaptation, target)
            .expect("distribution keys are leaves");
        let delta = cost - mean;
        mean += delta / n as f64;
        m2 += delta * (cost - mean);
    }
    let std_dev_ms = if samples > 1 {
        (m2 / (samples - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(MonteCarloEstimate {
        mean_ms: mean,
        std_dev_ms,
        std_err_ms: std_dev_ms / (samples as f64).sqrt(),
        samples,
    })
}

/// Mean of [`monte_carlo_estimate`]; deterministic for a fixed seed.
pub fn monte_carlo_expected_time(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    adaptation: NodeId,
    samples: usize,
    seed: u64,
) -> Result<f64, AdaptationError> {
    Ok(monte_carlo_estimate(tree, costs, dist, adaptation, samples, seed)?.mean_ms)
}
