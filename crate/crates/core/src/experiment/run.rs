use std::path::PathBuf;
use std::time::Instant;

use super::{group_columns, join_values, parse_objective, trace_csv, write_file};
use crate::cascade::{Deadline, SampleBank};
use crate::coverage::{CoverageModel, CoverageState};
use crate::error::{Error, Result};
use crate::graph::{load_edge_list, load_groups, Graph, GroupAssignment};
use crate::objectives::{max_minus_min, ObjectiveSpec};
use crate::solvers::{
    greedy_budget, greedy_cover, BudgetConfig, CoverConfig, CoverMode, SolveTrace,
};

/// Command-line level description of one solve.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graph: PathBuf,
    /// Without a group file every node lands in one group.
    pub groups: Option<PathBuf>,
    pub undirected: bool,
    pub deadline: Deadline,
    pub samples: usize,
    pub seed: u64,
    pub mode: RunMode,
    pub gamma: f64,
    /// Per-iteration CSV.
    pub out: Option<PathBuf>,
    /// Summary CSV.
    pub summary: Option<PathBuf>,
    /// Record wall time in the summary (makes output non-reproducible).
    pub timing: bool,
}

#[derive(Clone, Debug)]
pub enum RunMode {
    Budget {
        budget: usize,
        objective: String,
        lambda: Option<Vec<f64>>,
        normalize: bool,
    },
    Cover {
        quota: f64,
        mode: CoverMode,
    },
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            graph: PathBuf::new(),
            groups: None,
            undirected: false,
            deadline: Deadline::Finite(20),
            samples: 200,
            seed: 0,
            mode: RunMode::Budget {
                budget: 30,
                objective: "total".into(),
                lambda: None,
                normalize: false,
            },
            gamma: 0.0,
            out: None,
            summary: None,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub deadline: Deadline,
    pub samples: usize,
    pub b_or_q: String,
    pub seeds_used: usize,
    pub cov_total: f64,
    pub cov_groups: Vec<f64>,
    pub disparity: f64,
    pub gamma_obj_p3: f64,
    pub gamma_obj_p5: f64,
    pub wall_ms: Option<u128>,
}

impl SummaryRow {
    pub fn header(k: usize) -> String {
        format!(
            "method,tau,samples,B_or_Q,seeds_used,cov_total{},disparity,gamma_obj_p3,gamma_obj_p5,wall_ms",
            group_columns("cov_g", k)
        )
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{}{},{},{},{},{}",
            self.method,
            self.deadline,
            self.samples,
            self.b_or_q,
            self.seeds_used,
            self.cov_total,
            join_values(&self.cov_groups),
            self.disparity,
            self.gamma_obj_p3,
            self.gamma_obj_p5,
            self.wall_ms.map(|t| t.to_string()).unwrap_or_default()
        )
    }

    /// Header plus this row.
    pub fn csv(&self) -> String {
        format!(
            "{}\n{}\n",
            Self::header(self.cov_groups.len()),
            self.csv_line()
        )
    }
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub seeds: Vec<usize>,
    pub trace: SolveTrace,
    pub summary: SummaryRow,
}

fn summarize<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
    gamma: f64,
    method: String,
    deadline: Deadline,
    samples: usize,
    b_or_q: String,
) -> Result<SummaryRow> {
    let state = CoverageState::with_seeds(model, groups, seeds)?;
    let utilities = state.group_utilities();
    let cov_groups = state.normalized_utilities();
    let total: f64 = utilities.iter().sum();
    let disparity = max_minus_min(&cov_groups);
    Ok(SummaryRow {
        method,
        deadline,
        samples,
        b_or_q,
        seeds_used: seeds.len(),
        cov_total: total / model.num_nodes() as f64,
        cov_groups,
        disparity,
        gamma_obj_p3: total - gamma * disparity,
        gamma_obj_p5: seeds.len() as f64 + gamma * disparity,
        wall_ms: None,
    })
}

/// Budget greedy on a built bank.
pub fn run_budget(
    bank: &SampleBank,
    groups: &GroupAssignment,
    objective: &ObjectiveSpec,
    budget: usize,
    gamma: f64,
) -> Result<RunResult> {
    check_gamma(gamma)?;
    let (seeds, trace) =
        greedy_budget(bank, groups, &BudgetConfig::new(budget, objective.clone()))?;
    let summary = summarize(
        bank,
        groups,
        &seeds,
        gamma,
        objective.label(),
        bank.deadline(),
        bank.num_samples(),
        budget.to_string(),
    )?;
    Ok(RunResult {
        seeds,
        trace,
        summary,
    })
}

/// Cover greedy on a built bank. Method label is `plain` for the total
/// constraint and `fair` for the per-group constraint.
pub fn run_cover(
    bank: &SampleBank,
    groups: &GroupAssignment,
    quota: f64,
    mode: CoverMode,
    gamma: f64,
) -> Result<RunResult> {
    check_gamma(gamma)?;
    let (seeds, trace) = greedy_cover(bank, groups, &CoverConfig::new(mode, quota))?;
    let method = match mode {
        CoverMode::Total => "plain",
        CoverMode::PerGroup => "fair",
    };
    let summary = summarize(
        bank,
        groups,
        &seeds,
        gamma,
        method.into(),
        bank.deadline(),
        bank.num_samples(),
        quota.to_string(),
    )?;
    Ok(RunResult {
        seeds,
        trace,
        summary,
    })
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be >= 0, got {gamma}"
        )));
    }
    Ok(())
}

pub(crate) fn load_instance(
    graph: &PathBuf,
    groups: Option<&PathBuf>,
    undirected: bool,
) -> Result<(Graph, GroupAssignment)> {
    let g = load_edge_list(graph, !undirected)?;
    let groups = match groups {
        Some(path) => load_groups(path, g.num_nodes())?,
        None => GroupAssignment::single(g.num_nodes())?,
    };
    groups.check_graph(&g)?;
    Ok((g, groups))
}

fn execute(config: &RunConfig) -> Result<RunResult> {
    let started = Instant::now();
    let (graph, groups) = load_instance(&config.graph, config.groups.as_ref(), config.undirected)?;
    let bank = SampleBank::build(
        &graph,
        config.deadline,
        config.samples,
        config.seed,
        &Default::default(),
    )?;
    let mut result = match &config.mode {
        RunMode::Budget {
            budget,
            objective,
            lambda,
            normalize,
        } => {
            let spec = parse_objective(
                objective,
                groups.num_groups(),
                lambda.as_deref(),
                *normalize,
            )?;
            run_budget(&bank, &groups, &spec, *budget, config.gamma)?
        }
        RunMode::Cover { quota, mode } => run_cover(&bank, &groups, *quota, *mode, config.gamma)?,
    };
    if config.timing {
        result.summary.wall_ms = Some(started.elapsed().as_millis());
    }
    if let Some(out) = &config.out {
        write_file(out, &trace_csv(&result.trace, groups.num_groups()))?;
    }
    if let Some(path) = &config.summary {
        write_file(path, &result.summary.csv())?;
    }
    Ok(result)
}

pub fn cmd_budget(config: &RunConfig) -> Result<RunResult> {
    if !matches!(config.mode, RunMode::Budget { .. }) {
        return Err(Error::InvalidArgument(
            "budget command needs --budget".into(),
        ));
    }
    execute(config)
}

pub fn cmd_cover(config: &RunConfig) -> Result<RunResult> {
    if !matches!(config.mode, RunMode::Cover { .. }) {
        return Err(Error::InvalidArgument("cover command needs --quota".into()));
    }
    execute(config)
}
