//! Time-critical influence maximization under the independent-cascade
//! model, with group-fair surrogate objectives.
//!
//! The pipeline: load or [generate](synth::generate) a [`Graph`] with a
//! [`GroupAssignment`], freeze a [`SampleBank`] of live-edge samples for a
//! deadline, then run [`greedy_budget`] or [`greedy_cover`] against one of
//! the objectives in [`objectives`]. Exhaustive oracles in [`solvers`] and
//! [`cascade::exact_utility`] check the greedy guarantees on tiny graphs.

pub mod cascade;
pub mod coverage;
mod error;
pub mod experiment;
pub mod graph;
pub mod nodeset;
pub mod objectives;
pub mod solvers;
pub mod synth;

pub use cascade::{
    build_sample_bank, exact_utility, simulate_cascade, Deadline, ExactModel, SampleBank,
    UtilityEstimate,
};
pub use coverage::{CoverageModel, CoverageState};
pub use error::{Error, Result};
pub use graph::{
    load_edge_list, load_groups, save_edge_list, save_groups, validate, Edge, Graph,
    GroupAssignment,
};
pub use nodeset::NodeSet;
pub use objectives::{ConcaveFn, CoverageSpec, ObjectiveSpec};
pub use solvers::{greedy_budget, greedy_cover, BudgetConfig, CoverConfig, CoverMode, SolveTrace};
