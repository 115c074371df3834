//! Seeded generators for random menus, distributions, and cost parameters.
//!
//! Used by the property and acceptance suites to stress the simulator and
//! selection machinery on arbitrary tree shapes; handy for benchmarks too.
//! Everything is a pure function of the supplied generator, so a seeded rng
//! reproduces the same inputs.

use rand::Rng;

use crate::menu::{MenuSpec, MenuTree, TargetDistribution};
use crate::sim::CostParams;

/// Random tree with a node count drawn from `min_nodes..=max_nodes`.
/// Each new node attaches under a uniformly chosen existing node, so depth
/// and fan-out vary freely. Labels are `n0`, `n1`, ... in pre-order-free
/// attachment order; uniqueness is by construction.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, min_nodes: usize, max_nodes: usize) -> MenuTree {
    assert!(min_nodes >= 1 && min_nodes <= max_nodes);
    let n = rng.random_range(min_nodes..=max_nodes);
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        let parent = rng.random_range(0..i);
        children[parent].push(i);
    }
    fn build(index: usize, children: &[Vec<usize>]) -> MenuSpec {
        MenuSpec {
            label: format!("n{index}"),
            children: children[index]
                .iter()
                .map(|&c| build(c, children))
                .collect(),
        }
    }
    MenuTree::from_spec(&build(0, &children)).expect("generated tree is structurally valid")
}

/// Random distribution over the tree's leaves. Roughly a quarter of the
/// leaves get zero mass (at least one leaf stays positive); the rest get
/// uniform random weights, renormalized to sum to one.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, tree: &MenuTree) -> TargetDistribution {
    let leaves: Vec<_> = tree.leaves().collect();
    let keep = rng.random_range(0..leaves.len());
    let masses = leaves
        .iter()
        .enumerate()
        .map(|(i, &leaf)| {
            let weight = if i != keep && rng.random_bool(0.25) {
                0.0
            } else {
                rng.random_range(0.01..1.0)
            };
            (tree.label(leaf).to_string(), weight)
        })
        .collect();
    TargetDistribution::from_label_map(tree, &masses, true)
        .expect("generated weights are valid and positive in total")
}

/// Cost parameters drawn uniformly from `min_ms..max_ms` per component.
pub fn random_costs<R: Rng + ?Sized>(rng: &mut R, min_ms: f64, max_ms: f64) -> CostParams {
    CostParams {
        t_inspect_ms: rng.random_range(min_ms..max_ms),
        t_select_ms: rng.random_range(min_ms..max_ms),
        t_correct_ms: rng.random_range(min_ms..max_ms),
    }
}
