//! Greedy solvers for the budget and cover problems plus exhaustive
//! oracles for tiny instances.

mod brute;
mod greedy;

pub use brute::{brute_force_budget, brute_force_group_cover, MAX_BRUTE_SUBSETS};
pub use greedy::{
    greedy_budget, greedy_cover, BudgetConfig, CoverConfig, CoverMode, Strategy,
    DEFAULT_COVER_EPSILON,
};

/// One greedy iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    /// 1-based.
    pub iteration: usize,
    pub seed: usize,
    pub gain: f64,
    pub objective: f64,
    pub cov_total: f64,
    pub cov_groups: Vec<f64>,
    pub disparity: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveTrace {
    pub records: Vec<TraceRecord>,
}

impl SolveTrace {
    pub fn seeds(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.seed).collect()
    }
}
