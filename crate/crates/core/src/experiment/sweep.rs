use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use super::run::{load_instance, run_budget, run_cover, RunResult};
use super::{group_columns, join_values, write_file};
use crate::cascade::{Deadline, SampleBank};
use crate::error::{Error, Result};
use crate::graph::{Graph, GroupAssignment};
use crate::objectives::{ConcaveFn, ObjectiveSpec};
use crate::solvers::CoverMode;
use crate::synth::{generate, SynthConfig};

/// Offset between a replicate's generator seed and its bank seed, so the
/// two never share a random stream.
const BANK_SEED_OFFSET: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Tau,
    Budget,
    Quota,
    PAct,
    GroupFraction,
    HetHomRatio,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Tau => "tau",
            SweepParam::Budget => "budget",
            SweepParam::Quota => "quota",
            SweepParam::PAct => "p_act",
            SweepParam::GroupFraction => "group_fraction",
            SweepParam::HetHomRatio => "het_hom_ratio",
        }
    }

    fn needs_generator(self) -> bool {
        matches!(self, SweepParam::GroupFraction | SweepParam::HetHomRatio)
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "tau" => SweepParam::Tau,
            "budget" => SweepParam::Budget,
            "quota" => SweepParam::Quota,
            "p_act" => SweepParam::PAct,
            "group_fraction" => SweepParam::GroupFraction,
            "het_hom_ratio" => SweepParam::HetHomRatio,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown sweep parameter `{other}` (expected tau, budget, quota, p_act, group_fraction, het_hom_ratio)"
                )))
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<String>,
    pub replicates: Vec<u64>,
}

#[derive(Clone, Debug)]
pub enum GraphSource {
    /// Regenerated for every replicate seed.
    Synthetic(SynthConfig),
    Files {
        graph: PathBuf,
        groups: Option<PathBuf>,
        undirected: bool,
    },
}

/// Settings shared by every sweep cell. Exactly one of `budget` and
/// `quota` selects the problem; a `quota` sweep implies cover mode.
#[derive(Clone, Debug)]
pub struct SweepBase {
    pub source: GraphSource,
    pub deadline: Deadline,
    pub samples: usize,
    pub budget: Option<usize>,
    pub quota: Option<f64>,
    pub gamma: f64,
}

impl Default for SweepBase {
    fn default() -> Self {
        Self {
            source: GraphSource::Synthetic(SynthConfig::default()),
            deadline: Deadline::Finite(20),
            samples: 200,
            budget: Some(30),
            quota: None,
            gamma: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub param: &'static str,
    pub value: String,
    pub replicate: u64,
    pub result: super::SummaryRow,
}

impl SweepRow {
    pub fn header(k: usize) -> String {
        format!(
            "param,value,replicate,method,tau,samples,B_or_Q,seeds_used,cov_total{},disparity,gamma_obj_p3,gamma_obj_p5",
            group_columns("cov_g", k)
        )
    }

    pub fn csv_line(&self) -> String {
        let r = &self.result;
        format!(
            "{},{},{},{},{},{},{},{},{}{},{},{},{}",
            self.param,
            self.value,
            self.replicate,
            r.method,
            r.deadline,
            r.samples,
            r.b_or_q,
            r.seeds_used,
            r.cov_total,
            join_values(&r.cov_groups),
            r.disparity,
            r.gamma_obj_p3,
            r.gamma_obj_p5
        )
    }
}

#[derive(Clone, Copy, Debug)]
enum Problem {
    Budget(usize),
    Cover(f64),
}

/// One parsed sweep value applied to the base settings.
#[derive(Clone)]
struct Cell {
    deadline: Deadline,
    problem: Problem,
    p_act: Option<f64>,
    group_fraction: Option<f64>,
    het_hom_ratio: Option<f64>,
}

fn parse_f64(param: SweepParam, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad {} value `{v}`", param.name())))
}

fn resolve(base: &SweepBase, param: SweepParam, value: &str) -> Result<Cell> {
    let mut problem = match (base.budget, base.quota, param) {
        (_, _, SweepParam::Quota) => Problem::Cover(base.quota.unwrap_or(0.0)),
        (_, _, SweepParam::Budget) => Problem::Budget(base.budget.unwrap_or(0)),
        (Some(b), None, _) => Problem::Budget(b),
        (None, Some(q), _) => Problem::Cover(q),
        _ => {
            return Err(Error::InvalidArgument(
                "sweep needs exactly one of budget or quota".into(),
            ))
        }
    };
    let mut cell = Cell {
        deadline: base.deadline,
        problem,
        p_act: None,
        group_fraction: None,
        het_hom_ratio: None,
    };
    match param {
        SweepParam::Tau => cell.deadline = value.parse()?,
        SweepParam::Budget => {
            let b = value
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad budget value `{value}`")))?;
            problem = Problem::Budget(b);
            cell.problem = problem;
        }
        SweepParam::Quota => cell.problem = Problem::Cover(parse_f64(param, value)?),
        SweepParam::PAct => cell.p_act = Some(parse_f64(param, value)?),
        SweepParam::GroupFraction => cell.group_fraction = Some(parse_f64(param, value)?),
        SweepParam::HetHomRatio => cell.het_hom_ratio = Some(parse_f64(param, value)?),
    }
    Ok(cell)
}

fn instance(base: &SweepBase, cell: &Cell, replicate: u64) -> Result<(Graph, GroupAssignment)> {
    let (graph, groups) = match &base.source {
        GraphSource::Synthetic(cfg) => {
            let mut cfg = cfg.clone();
            cfg.seed = replicate;
            if let Some(g) = cell.group_fraction {
                cfg.group_fraction = g;
            }
            if let Some(r) = cell.het_hom_ratio {
                cfg.p_het = r * cfg.p_hom;
            }
            if let Some(p) = cell.p_act {
                cfg.p_act = p;
            }
            return generate(&cfg);
        }
        GraphSource::Files {
            graph,
            groups,
            undirected,
        } => load_instance(graph, groups.as_ref(), *undirected)?,
    };
    match cell.p_act {
        Some(p) => Ok((graph.with_uniform_probability(p)?, groups)),
        None => Ok((graph, groups)),
    }
}

type Method = Box<dyn Fn(&SampleBank, &GroupAssignment, f64) -> Result<RunResult> + Sync>;

fn methods(problem: Problem, k: usize) -> Vec<Method> {
    match problem {
        Problem::Budget(b) => [
            ObjectiveSpec::Total,
            ObjectiveSpec::concave(ConcaveFn::Log1p, k),
            ObjectiveSpec::concave(ConcaveFn::Sqrt, k),
        ]
        .into_iter()
        .map(|obj| {
            Box::new(
                move |bank: &SampleBank, groups: &GroupAssignment, gamma: f64| {
                    run_budget(bank, groups, &obj, b, gamma)
                },
            ) as Method
        })
        .collect(),
        Problem::Cover(q) => [CoverMode::Total, CoverMode::PerGroup]
            .into_iter()
            .map(|mode| {
                Box::new(
                    move |bank: &SampleBank, groups: &GroupAssignment, gamma: f64| {
                        run_cover(bank, groups, q, mode, gamma)
                    },
                ) as Method
            })
            .collect(),
    }
}

/// Runs every (value, replicate) cell and every method in it. Cells run in
/// parallel; rows come back ordered by value, replicate, then method.
///
/// Budget sweeps compare `plain`, `fair-log1p` and `fair-sqrt`; cover sweeps
/// compare `plain` (total constraint) and `fair` (per-group constraint).
/// All methods in a cell share one graph and one bank.
pub fn run_sweep(base: &SweepBase, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.values.is_empty() {
        return Err(Error::InvalidArgument("sweep value list is empty".into()));
    }
    if spec.replicates.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs at least one replicate seed".into(),
        ));
    }
    if spec.param.needs_generator() && !matches!(base.source, GraphSource::Synthetic(_)) {
        return Err(Error::InvalidArgument(format!(
            "`{}` sweeps regenerate the graph and cannot use a graph file",
            spec.param.name()
        )));
    }
    if spec.param == SweepParam::Quota && base.budget.is_some() && base.quota.is_none() {
        log::info!("quota sweep runs in cover mode; base budget ignored");
    }
    let cells: Vec<(usize, usize, Cell)> = spec
        .values
        .iter()
        .enumerate()
        .map(|(vi, v)| resolve(base, spec.param, v).map(|c| (vi, c)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flat_map(|(vi, c)| (0..spec.replicates.len()).map(move |ri| (vi, ri, c.clone())))
        .collect();

    let mut rows: Vec<(usize, usize, usize, SweepRow)> = cells
        .par_iter()
        .map(
            |(vi, ri, cell)| -> Result<Vec<(usize, usize, usize, SweepRow)>> {
                let replicate = spec.replicates[*ri];
                let (graph, groups) = instance(base, cell, replicate)?;
                let bank = SampleBank::build(
                    &graph,
                    cell.deadline,
                    base.samples,
                    replicate.wrapping_add(BANK_SEED_OFFSET),
                    &Default::default(),
                )?;
                methods(cell.problem, groups.num_groups())
                    .iter()
                    .enumerate()
                    .map(|(mi, method)| {
                        let result = method(&bank, &groups, base.gamma)?;
                        Ok((
                            *vi,
                            *ri,
                            mi,
                            SweepRow {
                                param: spec.param.name(),
                                value: spec.values[*vi].trim().to_string(),
                                replicate,
                                result: result.summary,
                            },
                        ))
                    })
                    .collect()
            },
        )
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    rows.sort_by_key(|(vi, ri, mi, _)| (*vi, *ri, *mi));
    Ok(rows.into_iter().map(|(_, _, _, r)| r).collect())
}

/// Runs the sweep and writes the long-format CSV to `out`.
pub fn cmd_sweep(base: &SweepBase, spec: &SweepSpec, out: &Path) -> Result<Vec<SweepRow>> {
    let rows = run_sweep(base, spec)?;
    let k = rows.first().map_or(0, |r| r.result.cov_groups.len());
    let mut csv = SweepRow::header(k);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.csv_line());
        csv.push('\n');
    }
    write_file(out, &csv)?;
    Ok(rows)
}
