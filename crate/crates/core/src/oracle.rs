//! Naive re-derivation of the interaction cost, used to cross-validate the
//! simulator and to quantify alternative accounting rules.
//!
//! The cost of a task splits into a backtracking phase (corrections out of
//! menus that cannot contain the target) and a search phase (inspections
//! and selections down the remaining path). Two accounting choices are kept
//! variable here:
//!
//! * [`BacktrackOp`]: how a backtrack level combines the correction cost
//!   with the scan cost. `Additive` charges `t_correct + scan·t_inspect`
//!   per level; `Multiplicative` charges the product
//!   `t_correct · (scan·t_inspect)`, which is dimensionally time² and kept
//!   only to measure how far that reading diverges.
//! * [`BoundaryRule`]: whether the menu where backtracking ends (the one
//!   that finally contains a relevant item) is scanned once (`Dedup`, the
//!   search phase pays for it) or twice (`DoubleCount`, the backtracking
//!   phase also pays up to the relevant item's position).
//!
//! The canonical variant is additive + dedup; it must agree with
//! [`crate::sim::interaction_cost`] everywhere. This module shares the tree
//! queries but none of the simulator's cost arithmetic.

use std::fmt;

use crate::adapt::{select_adaptation, utility_table_with, BenefitMode};
use crate::menu::{MenuTree, NodeId, TargetDistribution};
use crate::sim::{interaction_cost, CostParams, SimError};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BacktrackOp {
    Additive,
    Multiplicative,
}

impl fmt::Display for BacktrackOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BacktrackOp::Additive => "additive",
            BacktrackOp::Multiplicative => "multiplicative",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundaryRule {
    Dedup,
    DoubleCount,
}

impl fmt::Display for BoundaryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryRule::Dedup => "dedup",
            BoundaryRule::DoubleCount => "double-count",
        })
    }
}

/// One of the four cost accounting rules.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct OracleVariant {
    pub backtrack_op: BacktrackOp,
    pub boundary: BoundaryRule,
}

impl OracleVariant {
    /// The accounting the simulator implements.
    pub const CANONICAL: OracleVariant = OracleVariant {
        backtrack_op: BacktrackOp::Additive,
        boundary: BoundaryRule::Dedup,
    };

    /// All four variants, canonical first.
    pub fn all() -> [OracleVariant; 4] {
        [
            OracleVariant::CANONICAL,
            OracleVariant {
                backtrack_op: BacktrackOp::Additive,
                boundary: BoundaryRule::DoubleCount,
            },
            OracleVariant {
                backtrack_op: BacktrackOp::Multiplicative,
                boundary: BoundaryRule::Dedup,
            },
            OracleVariant {
                backtrack_op: BacktrackOp::Multiplicative,
                boundary: BoundaryRule::DoubleCount,
            },
        ]
    }

    pub fn is_canonical(&self) -> bool {
        *self == OracleVariant::CANONICAL
    }
}

impl fmt::Display for OracleVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.backtrack_op, self.boundary)
    }
}

fn backtrack_level(op: BacktrackOp, costs: &CostParams, scan: usize) -> f64 {
    let scan_cost = scan as f64 * costs.t_inspect_ms;
    match op {
        BacktrackOp::Additive => costs.t_correct_ms + scan_cost,
        BacktrackOp::Multiplicative => costs.t_correct_ms * scan_cost,
    }
}

/// Backtracking cost from `focus` up to the closest ancestor-or-self of
/// `target`, written as the textbook recursion over corrected-out menus.
/// Returns the accumulated cost and the menu where search resumes.
fn backtrack_cost(
    tree: &MenuTree,
    costs: &CostParams,
    focus: NodeId,
    target: NodeId,
    op: BacktrackOp,
) -> (f64, NodeId) {
    if tree.is_ancestor_or_self(focus, target) {
        return (0.0, focus);
    }
    // A leaf "menu" shows only itself; a sub-menu is scanned in full when
    // the relevant item is absent.
    let scan = if tree.is_leaf(focus) {
        1
    } else {
        tree.children(focus).len()
    };
    let parent = tree
        .parent(focus)
        .expect("the root is an ancestor of every target");
    let (rest, resume) = backtrack_cost(tree, costs, parent, target, op);
    (backtrack_level(op, costs, scan) + rest, resume)
}

/// Search-and-select cost descending from `from` to `target`: per level,
/// inspections up to the relevant item's position, then a selection.
fn search_cost(tree: &MenuTree, costs: &CostParams, from: NodeId, target: NodeId) -> f64 {
    if from == target {
        return 0.0;
    }
    let path = tree.path_from_root(target);
    let next = path[tree.depth(from) + 1];
    let position = tree
        .child_position(from, next)
        .expect("path node is a child of its predecessor");
    position as f64 * costs.t_inspect_ms
        + costs.t_select_ms
        + search_cost(tree, costs, next, target)
}

/// Total task cost under the chosen accounting rule. Independent
/// transcription of the cost model; deliberately shares no arithmetic with
/// [`crate::sim`].
pub fn naive_cost(
    tree: &MenuTree,
    costs: &CostParams,
    start: NodeId,
    target: NodeId,
    variant: OracleVariant,
) -> Result<f64, SimError> {
    if !tree.is_leaf(target) {
        return Err(SimError::TargetNotLeaf(tree.label(target).to_string()));
    }
    if start == target {
        // Recognizing the pre-selected action is one inspection in every
        // variant.
        return Ok(costs.t_inspect_ms);
    }
    // A wrong leaf start is itself the first backtrack level (scan length
    // one): its recognition inspection and correction are priced there.
    let (mut backtrack, resume) = backtrack_cost(tree, costs, start, target, variant.backtrack_op);
    let backtracked = resume != start;
    if backtracked && variant.boundary == BoundaryRule::DoubleCount {
        // Charge the scan of the boundary menu under backtracking as well;
        // the search phase scans it again from the first position.
        let path = tree.path_from_root(target);
        let relevant = path[tree.depth(resume) + 1];
        let position = tree
            .child_position(resume, relevant)
            .expect("path node is a child of its predecessor");
        backtrack += match variant.backtrack_op {
            BacktrackOp::Additive => position as f64 * costs.t_inspect_ms,
            BacktrackOp::Multiplicative => {
                costs.t_correct_ms * (position as f64 * costs.t_inspect_ms)
            }
        };
    }
    Ok(backtrack + search_cost(tree, costs, resume, target))
}

/// One line of the variant comparison report.
#[derive(Clone, PartialEq, Debug)]
pub struct VariantRow {
    pub variant: OracleVariant,
    pub scenario: String,
    pub selected: NodeId,
    /// Largest absolute deviation from the canonical interaction cost over
    /// all (start, target) pairs.
    pub max_abs_dev_ms: f64,
}

/// Evaluates every variant under one cost set: the adaptation it would
/// select and how far its pairwise costs deviate from the canonical ones.
pub fn variant_report(
    tree: &MenuTree,
    costs: &CostParams,
    dist: &TargetDistribution,
    mode: BenefitMode,
    scenario: &str,
) -> Vec<VariantRow> {
    OracleVariant::all()
        .into_iter()
        .map(|variant| {
            let table = utility_table_with(tree, costs, dist, mode, |start, leaf| {
                naive_cost(tree, costs, start, leaf, variant).expect("leaf target")
            });
            let selected = select_adaptation(&table).selected;
            let mut max_abs_dev_ms = 0.0f64;
            for start in tree.node_ids() {
                for target in tree.leaves() {
                    let naive = naive_cost(tree, costs, start, target, variant).unwrap();
                    let canonical = interaction_cost(tree, costs, start, target).unwrap();
                    max_abs_dev_ms = max_abs_dev_ms.max((naive - canonical).abs());
                }
            }
            VariantRow {
                variant,
                scenario: scenario.to_string(),
                selected,
                max_abs_dev_ms,
            }
        })
        .collect()
}

/// CSV export of report rows: `variant,scenario,selected,max_abs_dev_ms`.
pub fn variant_report_csv(tree: &MenuTree, rows: &[VariantRow]) -> String {
    use fmt::Write;
    let mut out = String::from("variant,scenario,selected,max_abs_dev_ms\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{:.3}",
            row.variant,
            row.scenario,
            tree.label(row.selected),
            row.max_abs_dev_ms
        )
        .expect("string write");
    }
    out
}
