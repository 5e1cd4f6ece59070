//! Experiment harness behind the CLI: single solves, parameter sweeps,
//! dataset generation and preparation, and the CSV schemas they emit.
//!
//! Every output is a function of the inputs and seeds alone. Wall-clock
//! time is only written when explicitly requested, so repeated runs produce
//! byte-identical files.

mod rice;
mod run;
mod sweep;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

pub use rice::{cmd_prep_rice, prep_rice, RiceOptions, RicePrep};
pub use run::{
    cmd_budget, cmd_cover, run_budget, run_cover, RunConfig, RunMode, RunResult, SummaryRow,
};
pub use sweep::{cmd_sweep, run_sweep, GraphSource, SweepBase, SweepParam, SweepRow, SweepSpec};

use crate::error::{Error, Result};
use crate::graph::{save_edge_list, save_groups, validate, GraphReport};
use crate::objectives::{ConcaveFn, ObjectiveSpec};
use crate::solvers::SolveTrace;
use crate::synth::{generate, SynthConfig};

/// Parses `total`, `concave:log1p`, `concave:sqrt` or `concave:pow:<r>`.
/// `lambda` defaults to all ones.
pub fn parse_objective(
    name: &str,
    k: usize,
    lambda: Option<&[f64]>,
    normalize: bool,
) -> Result<ObjectiveSpec> {
    let h = match name.split(':').collect::<Vec<_>>().as_slice() {
        ["total"] => {
            if lambda.is_some() || normalize {
                return Err(Error::InvalidArgument("--lambda/--normalize need a concave objective".into()));
            }
            return Ok(ObjectiveSpec::Total);
        }
        ["concave", "log1p"] => ConcaveFn::Log1p,
        ["concave", "sqrt"] => ConcaveFn::Sqrt,
        ["concave", "pow", r] => {
            let r = r
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad root order in `{name}`")))?;
            ConcaveFn::root(r)?
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown objective `{name}` (expected total, concave:log1p, concave:sqrt, concave:pow:<r>)"
            )))
        }
    };
    let spec = ObjectiveSpec::ConcaveSum {
        h,
        lambda: lambda.map_or_else(|| vec![1.0; k], <[f64]>::to_vec),
        normalize,
    };
    spec.check(k)?;
    Ok(spec)
}

pub(crate) fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(())
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    ensure_parent(path)?;
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(contents.as_bytes())
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn group_columns(prefix: &str, k: usize) -> String {
    (0..k).map(|i| format!(",{prefix}{i}")).collect()
}

pub(crate) fn join_values(values: &[f64]) -> String {
    values.iter().map(|v| format!(",{v}")).collect()
}

/// Per-iteration CSV:
/// `iter,seed_node,gain,objective,cov_total,cov_g0,...,cov_g{k-1},disparity`.
pub fn trace_csv(trace: &SolveTrace, k: usize) -> String {
    let mut out = format!(
        "iter,seed_node,gain,objective,cov_total{},disparity\n",
        group_columns("cov_g", k)
    );
    for r in &trace.records {
        out.push_str(&format!(
            "{},{},{},{},{}{},{}\n",
            r.iteration,
            r.seed,
            r.gain,
            r.objective,
            r.cov_total,
            join_values(&r.cov_groups),
            r.disparity
        ));
    }
    out
}

/// Generates a synthetic instance and writes it in the interchange formats.
pub fn cmd_gen(config: &SynthConfig, edges_out: &Path, groups_out: &Path) -> Result<GraphReport> {
    let (graph, groups) = generate(config)?;
    ensure_parent(edges_out)?;
    ensure_parent(groups_out)?;
    save_edge_list(&graph, edges_out)?;
    save_groups(&groups, groups_out)?;
    validate(&graph, &groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn objective_names() {
        assert_eq!(
            parse_objective("total", 2, None, false).unwrap(),
            ObjectiveSpec::Total
        );
        assert_eq!(
            parse_objective("concave:log1p", 2, None, false).unwrap(),
            ObjectiveSpec::concave(ConcaveFn::Log1p, 2)
        );
        assert_eq!(
            parse_objective("concave:pow:3", 1, Some(&[2.0]), true).unwrap(),
            ObjectiveSpec::ConcaveSum {
                h: ConcaveFn::Root(3),
                lambda: vec![2.0],
                normalize: true
            }
        );
        for bad in [
            "log",
            "concave",
            "concave:pow:1",
            "concave:pow:x",
            "concave:cbrt",
            "Total",
        ] {
            assert!(parse_objective(bad, 2, None, false).is_err(), "{bad}");
        }
        assert!(parse_objective("concave:sqrt", 2, Some(&[1.0]), false).is_err());
        assert!(parse_objective("concave:sqrt", 2, Some(&[1.0, -1.0]), false).is_err());
        assert!(parse_objective("total", 2, None, true).is_err());
    }

    #[test]
    fn trace_header() {
        let csv = trace_csv(&SolveTrace::default(), 3);
        assert_eq!(
            csv,
            "iter,seed_node,gain,objective,cov_total,cov_g0,cov_g1,cov_g2,disparity\n"
        );
    }
}
