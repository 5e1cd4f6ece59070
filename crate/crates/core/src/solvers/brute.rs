use itertools::Itertools;

use super::DEFAULT_COVER_EPSILON;
use crate::cascade::{Deadline, ExactModel};
use crate::coverage::CoverageState;
use crate::error::{Error, Result};
use crate::graph::{Graph, GroupAssignment};
use crate::objectives::ObjectiveSpec;

/// Largest number of subsets of one size the exhaustive searches visit.
pub const MAX_BRUTE_SUBSETS: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn check_subsets(n: usize, k: usize) -> Result<()> {
    let c = binomial(n, k);
    if c > MAX_BRUTE_SUBSETS {
        return Err(Error::InstanceTooLarge(format!("C({n},{k}) = {c} subsets")));
    }
    Ok(())
}

/// Optimal `budget`-subset under exact utilities. Among equal values the
/// lexicographically smallest set wins.
pub fn brute_force_budget(
    graph: &Graph,
    groups: &GroupAssignment,
    deadline: Deadline,
    objective: &ObjectiveSpec,
    budget: usize,
) -> Result<(Vec<usize>, f64)> {
    groups.check_graph(graph)?;
    objective.check(groups.num_groups())?;
    let n = graph.num_nodes();
    if budget > n {
        return Err(Error::InvalidArgument(format!(
            "budget {budget} exceeds node count {n}"
        )));
    }
    check_subsets(n, budget)?;
    let model = ExactModel::build(graph, deadline)?;
    let mut best: Option<(Vec<usize>, f64)> = None;
    for subset in (0..n).combinations(budget) {
        let state = CoverageState::with_seeds(&model, groups, &subset)?;
        let value = objective.value(&state.group_utilities(), state.group_sizes());
        if best.as_ref().is_none_or(|(_, b)| value > *b) {
            best = Some((subset, value));
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Smallest seed set whose exact normalized utility on `group` reaches
/// `quota` (within [`DEFAULT_COVER_EPSILON`]); lexicographically smallest
/// among minima.
pub fn brute_force_group_cover(
    graph: &Graph,
    groups: &GroupAssignment,
    group: usize,
    deadline: Deadline,
    quota: f64,
) -> Result<Vec<usize>> {
    groups.check_graph(graph)?;
    if group >= groups.num_groups() {
        return Err(Error::InvalidArgument(format!("no group {group}")));
    }
    if !(0.0..=1.0).contains(&quota) {
        return Err(Error::InvalidArgument(format!(
            "quota {quota} outside [0,1]"
        )));
    }
    let n = graph.num_nodes();
    let model = ExactModel::build(graph, deadline)?;
    let size = groups.sizes()[group] as f64;
    for k in 0..=n {
        check_subsets(n, k)?;
        for subset in (0..n).combinations(k) {
            let state = CoverageState::with_seeds(&model, groups, &subset)?;
            if state.group_utilities()[group] / size >= quota - DEFAULT_COVER_EPSILON {
                return Ok(subset);
            }
        }
    }
    unreachable!("the full node set covers every group")
}
