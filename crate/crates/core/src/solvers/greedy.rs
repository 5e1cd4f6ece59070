use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{SolveTrace, TraceRecord};
use crate::coverage::{CoverageModel, CoverageState};
use crate::error::{Error, Result};
use crate::graph::GroupAssignment;
use crate::objectives::{max_minus_min, CoverageSpec, ObjectiveSpec};

/// Cover termination slack. Bank utilities are multiples of
/// `1 / (N·|V_i|)`, far coarser than this.
pub const DEFAULT_COVER_EPSILON: f64 = 1e-9;

/// Candidate evaluation order. Both produce identical selections on a
/// submodular objective; `Naive` rescans every candidate each round.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    #[default]
    Lazy,
    Naive,
}

#[derive(Clone, Debug)]
pub struct BudgetConfig {
    pub budget: usize,
    pub objective: ObjectiveSpec,
    pub strategy: Strategy,
}

impl BudgetConfig {
    pub fn new(budget: usize, objective: ObjectiveSpec) -> Self {
        Self {
            budget,
            objective,
            strategy: Strategy::Lazy,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverMode {
    /// Normalized total utility must reach `Q`.
    Total,
    /// Every group's normalized utility must reach `Q`.
    PerGroup,
}

#[derive(Clone, Debug)]
pub struct CoverConfig {
    pub mode: CoverMode,
    pub quota: f64,
    pub epsilon: f64,
    /// Defaults to the node count.
    pub max_seeds: Option<usize>,
    pub strategy: Strategy,
}

impl CoverConfig {
    pub fn new(mode: CoverMode, quota: f64) -> Self {
        Self {
            mode,
            quota,
            epsilon: DEFAULT_COVER_EPSILON,
            max_seeds: None,
            strategy: Strategy::Lazy,
        }
    }
}

/// Set function over raw group utilities.
trait GroupObjective: Sync {
    fn value(&self, utilities: &[f64], sizes: &[usize]) -> f64;
}

impl GroupObjective for ObjectiveSpec {
    fn value(&self, utilities: &[f64], sizes: &[usize]) -> f64 {
        ObjectiveSpec::value(self, utilities, sizes)
    }
}

struct CoverObjective {
    mode: CoverMode,
    spec: CoverageSpec,
}

impl GroupObjective for CoverObjective {
    fn value(&self, utilities: &[f64], sizes: &[usize]) -> f64 {
        match self.mode {
            CoverMode::Total => {
                let n: usize = sizes.iter().sum();
                (utilities.iter().sum::<f64>() / n as f64).min(self.spec.quota())
            }
            CoverMode::PerGroup => {
                let normalized: Vec<f64> = utilities
                    .iter()
                    .zip(sizes)
                    .map(|(u, &s)| u / s as f64)
                    .collect();
                self.spec.value(&normalized)
            }
        }
    }
}

/// Gains this close (relative to the best gain) count as a tie.
const TIE_TOLERANCE: f64 = 1e-12;

fn tie_slack(best: f64) -> f64 {
    TIE_TOLERANCE * best.abs().max(1.0)
}

#[derive(Clone, Copy)]
struct Candidate {
    gain: f64,
    node: usize,
    /// Round in which `gain` was computed.
    round: usize,
}

// Max-heap order: larger gain first, then smaller node id.
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

struct Engine<'m, 'o, M: CoverageModel, O: GroupObjective> {
    state: CoverageState<'m, M>,
    objective: &'o O,
    current: f64,
    strategy: Strategy,
    heap: BinaryHeap<Candidate>,
    round: usize,
    trace: SolveTrace,
}

impl<'m, 'o, M: CoverageModel, O: GroupObjective> Engine<'m, 'o, M, O> {
    fn new(
        model: &'m M,
        groups: &GroupAssignment,
        objective: &'o O,
        strategy: Strategy,
    ) -> Result<Self> {
        let state = CoverageState::new(model, groups)?;
        let current = objective.value(&state.group_utilities(), state.group_sizes());
        Ok(Self {
            state,
            objective,
            current,
            strategy,
            heap: BinaryHeap::new(),
            round: 0,
            trace: SolveTrace::default(),
        })
    }

    fn gain(&self, v: usize) -> f64 {
        self.objective
            .value(&self.state.utilities_with(v), self.state.group_sizes())
            - self.current
    }

    fn fresh_candidates(&self) -> Vec<Candidate> {
        (0..self.state.num_nodes())
            .into_par_iter()
            .filter(|&v| !self.state.contains(v))
            .map(|v| Candidate {
                gain: self.gain(v),
                node: v,
                round: self.round,
            })
            .collect()
    }

    /// Best remaining candidate: the smallest id among those whose gain is
    /// within [`TIE_TOLERANCE`] (relative) of the maximum, or `None` if every
    /// node is already selected. The tolerance keeps rounding noise from
    /// deciding mathematically tied picks.
    fn select(&mut self) -> Option<Candidate> {
        match self.strategy {
            Strategy::Naive => {
                let all = self.fresh_candidates();
                let best = all.iter().map(|c| c.gain).fold(f64::NEG_INFINITY, f64::max);
                all.into_iter()
                    .filter(|c| c.gain >= best - tie_slack(best))
                    .min_by_key(|c| c.node)
            }
            Strategy::Lazy => {
                if self.round == 0 && self.heap.is_empty() {
                    self.heap = self.fresh_candidates().into();
                }
                let mut tied: Vec<Candidate> = Vec::new();
                let mut best = f64::NEG_INFINITY;
                while let Some(top) = self.heap.peek().copied() {
                    if !tied.is_empty() && top.gain < best - tie_slack(best) {
                        break;
                    }
                    self.heap.pop();
                    if top.round == self.round {
                        best = best.max(top.gain);
                        tied.push(top);
                    } else {
                        self.heap.push(Candidate {
                            gain: self.gain(top.node),
                            node: top.node,
                            round: self.round,
                        });
                    }
                }
                let pick = tied
                    .iter()
                    .filter(|c| c.gain >= best - tie_slack(best))
                    .min_by_key(|c| c.node)
                    .copied()?;
                self.heap
                    .extend(tied.into_iter().filter(|c| c.node != pick.node));
                Some(pick)
            }
        }
    }

    fn commit(&mut self, pick: Candidate) {
        self.state.add(pick.node);
        self.round += 1;
        let utilities = self.state.group_utilities();
        let objective = self.objective.value(&utilities, self.state.group_sizes());
        let gain = objective - self.current;
        self.current = objective;
        let cov_groups = self.state.normalized_utilities();
        let n = self.state.num_nodes() as f64;
        self.trace.records.push(TraceRecord {
            iteration: self.round,
            seed: pick.node,
            gain,
            objective,
            cov_total: utilities.iter().sum::<f64>() / n,
            disparity: max_minus_min(&cov_groups),
            cov_groups,
        });
    }
}

/// Picks exactly `budget` seeds, each maximizing the marginal gain of the
/// configured objective. Ties go to the smallest node id.
pub fn greedy_budget<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    config: &BudgetConfig,
) -> Result<(Vec<usize>, SolveTrace)> {
    let n = model.num_nodes();
    if config.budget > n {
        return Err(Error::InvalidArgument(format!(
            "budget {} exceeds node count {n}",
            config.budget
        )));
    }
    config.objective.check(groups.num_groups())?;
    let mut engine = Engine::new(model, groups, &config.objective, config.strategy)?;
    for _ in 0..config.budget {
        let pick = engine.select().expect("budget <= n leaves a candidate");
        engine.commit(pick);
    }
    Ok((engine.state.seeds().to_vec(), engine.trace))
}

/// Adds seeds greedily until the cover objective reaches its target
/// (`Q` in total mode, `k·Q` in per-group mode) within `epsilon`.
pub fn greedy_cover<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    config: &CoverConfig,
) -> Result<(Vec<usize>, SolveTrace)> {
    let spec = CoverageSpec::new(config.quota)?;
    if !(config.epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be >= 0".into()));
    }
    let objective = CoverObjective {
        mode: config.mode,
        spec,
    };
    let target = match config.mode {
        CoverMode::Total => config.quota,
        CoverMode::PerGroup => config.quota * groups.num_groups() as f64,
    };
    let max_seeds = config.max_seeds.unwrap_or(model.num_nodes());
    let mut engine = Engine::new(model, groups, &objective, config.strategy)?;
    while engine.current < target - config.epsilon {
        let pick = if engine.state.seeds().len() < max_seeds {
            engine.select()
        } else {
            None
        };
        let Some(pick) = pick else {
            return Err(Error::CoverNotReached {
                achieved: engine.current,
                target,
                seeds: engine.state.seeds().len(),
            });
        };
        engine.commit(pick);
    }
    Ok((engine.state.seeds().to_vec(), engine.trace))
}
