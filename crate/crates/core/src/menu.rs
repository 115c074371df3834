//! Hierarchical menu structure and target probabilities.
//!
//! A [`MenuTree`] is an ordered rooted tree: internal nodes are sub-menus,
//! leaves are actions. Node identity is a dense pre-order index, so
//! [`NodeId`] ordering equals traversal/display order everywhere. Trees and
//! distributions are immutable once built and safe to share across threads.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for the check that leaf probabilities sum to one.
pub const MASS_TOLERANCE: f64 = 1e-6;

/// Handle for a node in a [`MenuTree`], assigned in pre-order starting at 0.
///
/// Ids are only meaningful for the tree that issued them; indexing a
/// different tree with them panics or returns an arbitrary node.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct NodeId(usize);

impl NodeId {
    /// Position of the node in pre-order, usable as a dense array index.
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NodeKind {
    /// Sub-menu with at least one child.
    Internal,
    /// Action item; never has children.
    Leaf,
}

/// One node of a [`MenuTree`].
#[derive(Clone, PartialEq, Debug)]
pub struct MenuNode {
    id: NodeId,
    label: String,
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    depth: usize,
    kind: NodeKind,
}

impl MenuNode {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.parent
    }

    /// Children in display order.
    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    /// Distance from the root (root has depth 0).
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn is_leaf(&self) -> bool {
        self.kind == NodeKind::Leaf
    }
}

/// Declarative menu definition, mirroring the menu file format:
/// `{"label": ..., "children": [...]}` where leaves have absent or empty
/// `children`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MenuSpec {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<MenuSpec>,
}

impl MenuSpec {
    pub fn leaf(label: impl Into<String>) -> Self {
        MenuSpec {
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn submenu(label: impl Into<String>, children: Vec<MenuSpec>) -> Self {
        MenuSpec {
            label: label.into(),
            children,
        }
    }
}

#[derive(Error, Debug)]
pub enum MenuError {
    #[error("duplicate node label '{0}'")]
    DuplicateLabel(String),
    #[error("sub-menu '{0}' has no children")]
    EmptyInternal(String),
    #[error("leaf '{0}' has children")]
    LeafWithChildren(String),
    #[error("node '{0}' is not reachable from the root (multiple roots or detached subtree)")]
    MultipleRoots(String),
    #[error("cycle detected at node '{0}'")]
    Cycle(String),
    #[error("parent link of '{child}' does not match '{parent}'")]
    InconsistentParent { parent: String, child: String },
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("'{child}' is not a child of '{parent}'")]
    NotAChild { parent: String, child: String },
}

/// Ordered rooted tree of menu nodes.
#[derive(Clone, PartialEq, Debug)]
pub struct MenuTree {
    nodes: Vec<MenuNode>,
    root: NodeId,
    by_label: HashMap<String, NodeId>,
}

impl MenuTree {
    /// Builds and validates a tree from its declarative definition.
    ///
    /// Node ids are assigned in pre-order, so building the same spec twice
    /// yields identical trees.
    pub fn from_spec(spec: &MenuSpec) -> Result<Self, MenuError> {
        let mut nodes = Vec::new();
        let mut by_label = HashMap::new();
        build_node(spec, None, 0, &mut nodes, &mut by_label)?;
        let tree = MenuTree {
            nodes,
            root: NodeId(0),
            by_label,
        };
        tree.validate()?;
        Ok(tree)
    }

    /// Reconstructs the declarative definition (inverse of [`from_spec`]).
    ///
    /// [`from_spec`]: MenuTree::from_spec
    pub fn to_spec(&self) -> MenuSpec {
        self.spec_of(self.root)
    }

    fn spec_of(&self, id: NodeId) -> MenuSpec {
        let node = self.node(id);
        MenuSpec {
            label: node.label.clone(),
            children: node.children.iter().map(|&c| self.spec_of(c)).collect(),
        }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Panics if `id` was not issued by this tree.
    pub fn node(&self, id: NodeId) -> &MenuNode {
        &self.nodes[id.0]
    }

    pub fn label(&self, id: NodeId) -> &str {
        self.node(id).label()
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.node(id).parent
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.node(id).children
    }

    pub fn depth(&self, id: NodeId) -> usize {
        self.node(id).depth
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.node(id).is_leaf()
    }

    /// Resolves a label to its node, if present. Matching is exact and
    /// case-sensitive.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.by_label.get(label).copied()
    }

    /// Like [`node_by_label`] but with a structured error for CLI surfaces.
    ///
    /// [`node_by_label`]: MenuTree::node_by_label
    pub fn resolve_label(&self, label: &str) -> Result<NodeId, MenuError> {
        self.node_by_label(label)
            .ok_or_else(|| MenuError::UnknownLabel(label.to_string()))
    }

    /// All node ids in pre-order.
    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).map(NodeId)
    }

    /// All leaf ids in pre-order.
    pub fn leaves(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().filter(|n| n.is_leaf()).map(|n| n.id)
    }

    /// Path from the root to `id`, inclusive on both ends.
    pub fn path_from_root(&self, id: NodeId) -> Vec<NodeId> {
        let mut path = Vec::with_capacity(self.depth(id) + 1);
        let mut cur = Some(id);
        while let Some(n) = cur {
            path.push(n);
            cur = self.parent(n);
        }
        path.reverse();
        path
    }

    /// True when `ancestor` lies on the root path of `node` (or equals it).
    pub fn is_ancestor_or_self(&self, ancestor: NodeId, node: NodeId) -> bool {
        let target_depth = self.depth(ancestor);
        let mut cur = node;
        while self.depth(cur) > target_depth {
            cur = self.parent(cur).expect("non-root node has a parent");
        }
        cur == ancestor
    }

    /// Deepest node that is an ancestor-or-self of both `a` and `b`.
    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        let mut x = a;
        let mut y = b;
        while self.depth(x) > self.depth(y) {
            x = self.parent(x).expect("deeper node has a parent");
        }
        while self.depth(y) > self.depth(x) {
            y = self.parent(y).expect("deeper node has a parent");
        }
        while x != y {
            x = self.parent(x).expect("nodes above depth 0 have parents");
            y = self.parent(y).expect("nodes above depth 0 have parents");
        }
        x
    }

    /// 1-based display position of `child` within `parent`.
    pub fn child_position(&self, parent: NodeId, child: NodeId) -> Result<usize, MenuError> {
        self.node(parent)
            .children
            .iter()
            .position(|&c| c == child)
            .map(|p| p + 1)
            .ok_or_else(|| MenuError::NotAChild {
                parent: self.label(parent).to_string(),
                child: self.label(child).to_string(),
            })
    }

    /// Full structural check: single root, no cycles, parent/child link
    /// consistency, kind consistency, unique labels.
    fn validate(&self) -> Result<(), MenuError> {
        // Kind and label table consistency.
        let mut seen = HashMap::new();
        for node in &self.nodes {
            match node.kind {
                NodeKind::Internal if node.children.is_empty() => {
                    return Err(MenuError::EmptyInternal(node.label.clone()));
                }
                NodeKind::Leaf if !node.children.is_empty() => {
                    return Err(MenuError::LeafWithChildren(node.label.clone()));
                }
                _ => {}
            }
            if seen.insert(node.label.clone(), node.id).is_some() {
                return Err(MenuError::DuplicateLabel(node.label.clone()));
            }
        }

        // Exactly one parentless node, and it is the designated root.
        for node in &self.nodes {
            if node.parent.is_none() && node.id != self.root {
                return Err(MenuError::MultipleRoots(node.label.clone()));
            }
        }
        if self.node(self.root).parent.is_some() {
            return Err(MenuError::Cycle(self.label(self.root).to_string()));
        }

        // Every node is reached exactly once from the root.
        let mut visited = vec![false; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            if visited[id.0] {
                return Err(MenuError::Cycle(self.label(id).to_string()));
            }
            visited[id.0] = true;
            for &child in self.children(id) {
                if self.parent(child) != Some(id) {
                    return Err(MenuError::InconsistentParent {
                        parent: self.label(id).to_string(),
                        child: self.label(child).to_string(),
                    });
                }
                stack.push(child);
            }
        }
        if let Some(unreached) = self.nodes.iter().find(|n| !visited[n.id.0]) {
            // Walk its ancestry: a loop means a cycle, a second parentless
            // node means a detached subtree.
            let mut hops = 0;
            let mut cur = unreached.id;
            while let Some(p) = self.parent(cur) {
                cur = p;
                hops += 1;
                if hops > self.nodes.len() {
                    return Err(MenuError::Cycle(unreached.label.clone()));
                }
            }
            return Err(MenuError::MultipleRoots(self.label(cur).to_string()));
        }
        Ok(())
    }
}

fn build_node(
    spec: &MenuSpec,
    parent: Option<NodeId>,
    depth: usize,
    nodes: &mut Vec<MenuNode>,
    by_label: &mut HashMap<String, NodeId>,
) -> Result<NodeId, MenuError> {
    let id = NodeId(nodes.len());
    if by_label.insert(spec.label.clone(), id).is_some() {
        return Err(MenuError::DuplicateLabel(spec.label.clone()));
    }
    let kind = if spec.children.is_empty() {
        NodeKind::Leaf
    } else {
        NodeKind::Internal
    };
    nodes.push(MenuNode {
        id,
        label: spec.label.clone(),
        parent,
        children: Vec::new(),
        depth,
        kind,
    });
    for child_spec in &spec.children {
        let child = build_node(child_spec, Some(id), depth + 1, nodes, by_label)?;
        nodes[id.0].children.push(child);
    }
    Ok(id)
}

#[derive(Error, Debug)]
pub enum DistributionError {
    #[error("distribution key '{0}' does not name a menu item")]
    UnknownLabel(String),
    #[error("distribution key '{0}' is not a leaf item")]
    NotALeaf(String),
    #[error("probability for '{label}' must be finite and non-negative, got {value}")]
    InvalidMass { label: String, value: f64 },
    #[error("leaf probabilities sum to {sum}, expected 1 within {MASS_TOLERANCE} (enable renormalization to rescale)")]
    MassSumOutOfTolerance { sum: f64 },
    #[error("cannot renormalize a distribution with zero total mass")]
    ZeroTotalMass,
}

/// Probability of each leaf action being the user's target.
///
/// Every leaf of the associated tree has an entry (possibly zero). Internal
/// nodes carry no entry of their own; their probability is the mass of their
/// leaf subtree, see [`subtree_mass`](TargetDistribution::subtree_mass).
#[derive(Clone, PartialEq, Debug)]
pub struct TargetDistribution {
    mass: BTreeMap<NodeId, f64>,
}

impl TargetDistribution {
    /// Validates a label-keyed probability map against `tree`.
    ///
    /// Leaves absent from `masses` get probability zero. Unless
    /// `renormalize` is set, the total mass must be 1 within
    /// [`MASS_TOLERANCE`]; with it, any positive total is rescaled to 1.
    pub fn from_label_map(
        tree: &MenuTree,
        masses: &BTreeMap<String, f64>,
        renormalize: bool,
    ) -> Result<Self, DistributionError> {
        let mut mass: BTreeMap<NodeId, f64> = tree.leaves().map(|l| (l, 0.0)).collect();
        for (label, &value) in masses {
            let id = tree
                .node_by_label(label)
                .ok_or_else(|| DistributionError::UnknownLabel(label.clone()))?;
            if !tree.is_leaf(id) {
                return Err(DistributionError::NotALeaf(label.clone()));
            }
            if !value.is_finite() || value < 0.0 {
                return Err(DistributionError::InvalidMass {
                    label: label.clone(),
                    value,
                });
            }
            mass.insert(id, value);
        }
        let sum: f64 = mass.values().sum();
        if renormalize {
            if sum <= 0.0 {
                return Err(DistributionError::ZeroTotalMass);
            }
            for value in mass.values_mut() {
                *value /= sum;
            }
        } else if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(DistributionError::MassSumOutOfTolerance { sum });
        }
        Ok(TargetDistribution { mass })
    }

    /// Uniform probability over all leaves.
    pub fn uniform(tree: &MenuTree) -> Self {
        let n = tree.leaves().count();
        let p = 1.0 / n as f64;
        TargetDistribution {
            mass: tree.leaves().map(|l| (l, p)).collect(),
        }
    }

    /// All mass on a single leaf.
    pub fn degenerate(tree: &MenuTree, leaf: NodeId) -> Result<Self, DistributionError> {
        if !tree.is_leaf(leaf) {
            return Err(DistributionError::NotALeaf(tree.label(leaf).to_string()));
        }
        let mass = tree
            .leaves()
            .map(|l| (l, if l == leaf { 1.0 } else { 0.0 }))
            .collect();
        Ok(TargetDistribution { mass })
    }

    /// Probability of `leaf`; `None` when the id is not a leaf of the tree
    /// this distribution was built for.
    pub fn leaf_mass(&self, leaf: NodeId) -> Option<f64> {
        self.mass.get(&leaf).copied()
    }

    /// `(leaf, probability)` pairs in pre-order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.mass.iter().map(|(&id, &p)| (id, p))
    }

    /// Probability that the target lies in the subtree rooted at `node`:
    /// the leaf's own mass for leaves, the ordered sum of the children's
    /// subtree masses for sub-menus.
    pub fn subtree_mass(&self, tree: &MenuTree, node: NodeId) -> f64 {
        match self.mass.get(&node) {
            Some(&p) => p,
            None => tree
                .children(node)
                .iter()
                .map(|&c| self.subtree_mass(tree, c))
                .sum(),
        }
    }

    /// Total mass, i.e. the subtree mass of the root (1 up to validation
    /// tolerance).
    pub fn total_mass(&self, tree: &MenuTree) -> f64 {
        self.subtree_mass(tree, tree.root())
    }

    /// Label-keyed view of the leaf masses, for serialization.
    pub fn to_label_map(&self, tree: &MenuTree) -> BTreeMap<String, f64> {
        self.mass
            .iter()
            .map(|(&id, &p)| (tree.label(id).to_string(), p))
            .collect()
    }
}
