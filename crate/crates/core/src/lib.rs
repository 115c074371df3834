//! Simulation-driven starting-point selection for hierarchical menus.
//!
//! Given a menu tree, a probability distribution over its leaf actions, and
//! three time costs (inspect, select, correct), this crate simulates a
//! serial-search user from any starting node to any target, computes the
//! expected selection time of every candidate starting point, and picks the
//! one minimizing expected time, in contrast to a greedy policy that only
//! chases the highest-probability action.
//!
//! Module map:
//!
//! * [`menu`]: tree structure, label lookup, LCA/positions, leaf
//!   probability distributions and subtree masses.
//! * [`sim`]: the action-by-action simulator, its closed-form cost, and
//!   trace export.
//! * [`adapt`]: utility tables, argmin selection with documented
//!   tie-breaks, the greedy baseline, and a seeded Monte Carlo check.
//! * [`oracle`]: an independent naive transcription of the cost model plus
//!   alternative accounting variants, for cross-validation.
//! * [`bundle`]: JSON scenario bundles and the shipped walkthrough
//!   fixture.
//! * [`synth`]: seeded random inputs for property testing and benchmarks.

pub mod adapt;
pub mod bundle;
pub mod menu;
pub mod oracle;
pub mod sim;
pub mod synth;

pub use adapt::{AdaptationResult, BenefitMode, UtilityTable};
pub use bundle::{Scenario, ScenarioBundle};
pub use menu::{MenuSpec, MenuTree, NodeId, TargetDistribution};
pub use sim::{ActionTrace, CostParams};
