//! Serial-search interaction simulation and its closed-form cost.
//!
//! The simulated user starts at an arbitrary node (the adaptation), reads
//! menus item by item in display order, backtracks out of sub-menus that
//! cannot contain the target, and selects down the remaining path. Three
//! time costs price the three action kinds.
//!
//! Canonical semantics, fixed here and mirrored by the naive oracle in
//! [`crate::oracle`]:
//!
//! 1. A leaf start is recognized with a single inspection; if it is not the
//!    target, one correction moves focus to its parent. Starting at a
//!    sub-menu (or the root) costs nothing up front: displaying that menu is
//!    the system's action, not the user's.
//! 2. While the focused menu is not an ancestor-or-self of the target, the
//!    user inspects every item of the menu, corrects, and moves focus to the
//!    parent. A menu is scanned once; the menu that does contain a relevant
//!    item is charged under the search phase, not here.
//! 3. From there the user descends: at each level they inspect items 1..=p
//!    where p is the display position of the child leading to the target,
//!    then select it, until the target itself is selected.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::menu::{MenuTree, NodeId};

#[derive(Error, Debug)]
pub enum SimError {
    #[error("target '{0}' is not a leaf item")]
    TargetNotLeaf(String),
    #[error("cost parameter {name} must be finite and non-negative, got {value}")]
    InvalidCost { name: &'static str, value: f64 },
}

/// The three time-based interaction costs, in milliseconds.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct CostParams {
    pub t_inspect_ms: f64,
    pub t_select_ms: f64,
    pub t_correct_ms: f64,
}

impl CostParams {
    pub fn new(t_inspect_ms: f64, t_select_ms: f64, t_correct_ms: f64) -> Result<Self, SimError> {
        let params = CostParams {
            t_inspect_ms,
            t_select_ms,
            t_correct_ms,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, value) in [
            ("t_inspect_ms", self.t_inspect_ms),
            ("t_select_ms", self.t_select_ms),
            ("t_correct_ms", self.t_correct_ms),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(SimError::InvalidCost { name, value });
            }
        }
        Ok(())
    }

    pub fn cost_of(&self, kind: ActionKind) -> f64 {
        match kind {
            ActionKind::Inspect => self.t_inspect_ms,
            ActionKind::Select => self.t_select_ms,
            ActionKind::Correct => self.t_correct_ms,
        }
    }

    /// All three costs multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> CostParams {
        CostParams {
            t_inspect_ms: self.t_inspect_ms * factor,
            t_select_ms: self.t_select_ms * factor,
            t_correct_ms: self.t_correct_ms * factor,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActionKind {
    Inspect,
    Select,
    Correct,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::Inspect => "INSPECT",
            ActionKind::Select => "SELECT",
            ActionKind::Correct => "CORRECT",
        })
    }
}

/// One simulated user action. For corrections, `node` is the menu the user
/// corrected out of; for inspections and selections it is the item acted on.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ActionEvent {
    pub kind: ActionKind,
    pub node: NodeId,
    pub cost_ms: f64,
}

/// How many actions of each kind a task takes. The counts depend only on
/// the tree, start, and target; cost is linear in the three parameters.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct ActionCounts {
    pub inspect: u32,
    pub select: u32,
    pub correct: u32,
}

impl ActionCounts {
    /// Total time under `costs`, evaluated as
    /// `inspect·t_inspect + select·t_select + correct·t_correct`.
    pub fn price(&self, costs: &CostParams) -> f64 {
        f64::from(self.inspect) * costs.t_inspect_ms
            + f64::from(self.select) * costs.t_select_ms
            + f64::from(self.correct) * costs.t_correct_ms
    }
}

/// Ordered action sequence for one target acquisition task.
#[derive(Clone, PartialEq, Debug)]
pub struct ActionTrace {
    events: Vec<ActionEvent>,
    start: NodeId,
    target: NodeId,
}

impl ActionTrace {
    pub fn events(&self) -> &[ActionEvent] {
        &self.events
    }

    pub fn start(&self) -> NodeId {
        self.start
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn count(&self, kind: ActionKind) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }

    pub fn counts(&self) -> ActionCounts {
        let mut counts = ActionCounts::default();
        for event in &self.events {
            match event.kind {
                ActionKind::Inspect => counts.inspect += 1,
                ActionKind::Select => counts.select += 1,
                ActionKind::Correct => counts.correct += 1,
            }
        }
        counts
    }

    /// Sum of per-event costs.
    pub fn total_cost_ms(&self) -> f64 {
        self.events.iter().map(|e| e.cost_ms).sum()
    }

    /// Line-oriented export: one `<KIND> <label> <cost_ms>` line per event
    /// plus a trailing `TOTAL <ms>` line. Milliseconds use fixed 3-decimal
    /// formatting.
    pub fn export(&self, tree: &MenuTree) -> String {
        use fmt::Write;
        let mut out = String::new();
        for event in &self.events {
            writeln!(
                out,
                "{} {} {:.3}",
                event.kind,
                tree.label(event.node),
                event.cost_ms
            )
            .expect("string write");
        }
        writeln!(out, "TOTAL {:.3}", self.total_cost_ms()).expect("string write");
        out
    }
}

/// Simulates the canonical action sequence from `start` to the leaf
/// `target` and prices each event.
pub fn simulate_trace(
    tree: &MenuTree,
    costs: &CostParams,
    start: NodeId,
    target: NodeId,
) -> Result<ActionTrace, SimError> {
    if !tree.is_leaf(target) {
        return Err(SimError::TargetNotLeaf(tree.label(target).to_string()));
    }
    let mut events = Vec::new();
    let push = |kind: ActionKind, node: NodeId, events: &mut Vec<ActionEvent>| {
        events.push(ActionEvent {
            kind,
            node,
            cost_ms: costs.cost_of(kind),
        });
    };

    let mut focus = start;
    if tree.is_leaf(start) {
        push(ActionKind::Inspect, start, &mut events);
        if start == target {
            return Ok(ActionTrace {
                events,
                start,
                target,
            });
        }
        push(ActionKind::Correct, start, &mut events);
        focus = tree
            .parent(start)
            .expect("leaf distinct from target has a parent");
    }

    while !tree.is_ancestor_or_self(focus, target) {
        for &item in tree.children(focus) {
            push(ActionKind::Inspect, item, &mut events);
        }
        push(ActionKind::Correct, focus, &mut events);
        focus = tree
            .parent(focus)
            .expect("root is an ancestor of every leaf");
    }

    let path = tree.path_from_root(target);
    for &next in &path[tree.depth(focus) + 1..] {
        let position = tree
            .child_position(focus, next)
            .expect("path node is a child of its predecessor");
        for &item in &tree.children(focus)[..position] {
            push(ActionKind::Inspect, item, &mut events);
        }
        push(ActionKind::Select, next, &mut events);
        focus = next;
    }

    Ok(ActionTrace {
        events,
        start,
        target,
    })
}

/// Sum of per-event costs of a trace.
pub fn trace_cost(trace: &ActionTrace) -> f64 {
    trace.total_cost_ms()
}

/// Closed-form action counts for the canonical semantics, without building
/// the event list.
pub fn action_counts(
    tree: &MenuTree,
    start: NodeId,
    target: NodeId,
) -> Result<ActionCounts, SimError> {
    if !tree.is_leaf(target) {
        return Err(SimError::TargetNotLeaf(tree.label(target).to_string()));
    }
    let mut counts = ActionCounts::default();
    let mut focus = start;
    if tree.is_leaf(start) {
        counts.inspect += 1;
        if start == target {
            return Ok(counts);
        }
        counts.correct += 1;
        focus = tree
            .parent(start)
            .expect("leaf distinct from target has a parent");
    }
    while !tree.is_ancestor_or_self(focus, target) {
        counts.inspect += tree.children(focus).len() as u32;
        counts.correct += 1;
        focus = tree
            .parent(focus)
            .expect("root is an ancestor of every leaf");
    }
    let path = tree.path_from_root(target);
    for &next in &path[tree.depth(focus) + 1..] {
        let position = tree
            .child_position(focus, next)
            .expect("path node is a child of its predecessor");
        counts.inspect += position as u32;
        counts.select += 1;
        focus = next;
    }
    Ok(counts)
}

/// Total interaction time from `start` to the leaf `target`: the closed
/// form of [`simulate_trace`] + [`trace_cost`]. Agrees with the trace total
/// to within floating-point reordering (1e-9 ms in practice; exact for
/// integer-valued costs).
pub fn interaction_cost(
    tree: &MenuTree,
    costs: &CostParams,
    start: NodeId,
    target: NodeId,
) -> Result<f64, SimError> {
    Ok(action_counts(tree, start, target)?.price(costs))
}

/// Search-and-select cost of reaching `node` from the root: at each level,
/// inspections up to the relevant item's position plus one selection,
/// including the selection of `node` itself. Zero for the root. Unlike
/// [`interaction_cost`], `node` may be a sub-menu.
pub fn root_search_cost(tree: &MenuTree, costs: &CostParams, node: NodeId) -> f64 {
    let mut counts = ActionCounts::default();
    let path = tree.path_from_root(node);
    for pair in path.windows(2) {
        let position = tree
            .child_position(pair[0], pair[1])
            .expect("path node is a child of its predecessor");
        counts.inspect += position as u32;
        counts.select += 1;
    }
    counts.price(costs)
}
