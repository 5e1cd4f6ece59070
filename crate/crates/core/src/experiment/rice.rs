//! Preparation of the Rice-Facebook friendship data.
//!
//! The raw data is not bundled. Expected inputs:
//! - an edge file with one friendship per line, `id1 id2` (whitespace or
//!   comma separated, further columns ignored);
//! - an attribute file with one node per line, `id college age major`
//!   (the age column index is configurable).
//!
//! Only students aged 18, 19 or 20 are kept: ages 18-19 form group 0 and
//! age 20 forms group 1. Retained nodes get dense ids in attribute-file
//! order and every friendship becomes two directed edges.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{ensure_parent, write_file};
use crate::error::{Error, Result};
use crate::graph::{
    save_edge_list, save_groups, validate, Edge, Graph, GraphReport, GroupAssignment,
};

#[derive(Clone, Debug)]
pub struct RiceOptions {
    /// 0-based column of the age field; column 0 is the node id.
    pub age_column: usize,
    /// Activation probability written on every edge.
    pub p_act: f64,
}

impl Default for RiceOptions {
    fn default() -> Self {
        Self {
            age_column: 2,
            p_act: 0.01,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RicePrep {
    pub graph: Graph,
    pub groups: GroupAssignment,
    pub report: GraphReport,
    /// Raw id of each dense node id.
    pub original_ids: Vec<String>,
    /// Attribute rows dropped for an age outside 18-20.
    pub excluded_nodes: usize,
    /// Friendships dropped because an endpoint was not retained.
    pub dropped_edges: usize,
}

fn fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .collect()
}

fn group_for_age(age: i64) -> Option<usize> {
    match age {
        18 | 19 => Some(0),
        20 => Some(1),
        _ => None,
    }
}

pub fn prep_rice(
    edges: impl BufRead,
    attributes: impl BufRead,
    options: &RiceOptions,
) -> Result<RicePrep> {
    let mut ids: Vec<String> = Vec::new();
    let mut labels = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut seen_ids = HashSet::new();
    let mut excluded = 0;
    let mut data_lines = 0;
    for (i, line) in attributes.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<attributes>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols = fields(line);
        if cols.len() <= options.age_column {
            return Err(Error::parse(
                lineno,
                format!(
                    "schema mismatch: expected an age in column {}",
                    options.age_column
                ),
            ));
        }
        data_lines += 1;
        let age: i64 = match cols[options.age_column].parse() {
            Ok(a) => a,
            // a leading non-numeric row is a header
            Err(_) if data_lines == 1 => continue,
            Err(_) => {
                return Err(Error::parse(
                    lineno,
                    "schema mismatch: age is not an integer",
                ))
            }
        };
        let id = cols[0].to_string();
        if !seen_ids.insert(id.clone()) {
            return Err(Error::parse(lineno, format!("duplicate node {id}")));
        }
        match group_for_age(age) {
            Some(g) => {
                index.insert(id.clone(), ids.len());
                ids.push(id);
                labels.push(g);
            }
            None => excluded += 1,
        }
    }
    if excluded > 0 {
        log::warn!("excluded {excluded} nodes with ages outside 18-20");
    }
    if ids.is_empty() {
        return Err(Error::InvalidArgument("no nodes retained".into()));
    }

    let mut pairs = HashSet::new();
    let mut out = Vec::new();
    let mut dropped = 0;
    for (i, line) in edges.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io("<edges>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols = fields(line);
        if cols.len() < 2 {
            return Err(Error::parse(
                lineno,
                "schema mismatch: expected two node ids",
            ));
        }
        let (Some(&u), Some(&v)) = (index.get(cols[0]), index.get(cols[1])) else {
            dropped += 1;
            continue;
        };
        if u == v || !pairs.insert((u.min(v), u.max(v))) {
            continue;
        }
        out.push(Edge::new(u, v, options.p_act));
        out.push(Edge::new(v, u, options.p_act));
    }

    let graph = Graph::new(ids.len(), out)?;
    let groups = GroupAssignment::new(labels).map_err(|_| {
        Error::InvalidArgument("retained nodes do not cover both age groups".into())
    })?;
    let report = validate(&graph, &groups)?;
    Ok(RicePrep {
        graph,
        groups,
        report,
        original_ids: ids,
        excluded_nodes: excluded,
        dropped_edges: dropped,
    })
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Runs [`prep_rice`] on files and writes the edge list, group file and a
/// text stats report.
pub fn cmd_prep_rice(
    raw_edges: &Path,
    raw_attributes: &Path,
    edges_out: &Path,
    groups_out: &Path,
    stats_out: Option<&Path>,
    options: &RiceOptions,
) -> Result<RicePrep> {
    let prep = prep_rice(open(raw_edges)?, open(raw_attributes)?, options)?;
    ensure_parent(edges_out)?;
    ensure_parent(groups_out)?;
    save_edge_list(&prep.graph, edges_out)?;
    save_groups(&prep.groups, groups_out)?;
    if let Some(path) = stats_out {
        let stats = format!(
            "{}excluded_nodes {}\ndropped_edges {}\n",
            prep.report, prep.excluded_nodes, prep.dropped_edges
        );
        write_file(path, &stats)?;
    }
    Ok(prep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fixture() {
        let attrs = "id college age major\n10 1 18 3\n11 2 20 4\n12 1 25 5\n";
        let edges = "10 11\n11 10\n10 12\n";
        let p = prep_rice(edges.as_bytes(), attrs.as_bytes(), &RiceOptions::default()).unwrap();
        assert_eq!(p.groups.labels(), &[0, 1]);
        assert_eq!(p.original_ids, vec!["10", "11"]);
        assert_eq!(p.excluded_nodes, 1);
        assert_eq!(p.dropped_edges, 1);
        assert_eq!(p.report.edges, 2);
        assert_eq!(p.report.cross, 2);
        assert!(p.graph.edges().iter().all(|e| e.p == 0.01));
    }

    #[test]
    fn empty_attributes() {
        let err = prep_rice("".as_bytes(), "".as_bytes(), &RiceOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "invalid argument: no nodes retained");
    }

    #[test]
    fn schema_mismatch() {
        let err =
            prep_rice("".as_bytes(), "1 2\n".as_bytes(), &RiceOptions::default()).unwrap_err();
        assert!(err.to_string().contains("schema mismatch"));
        let err = prep_rice(
            "".as_bytes(),
            "1,1,18\n2,1,old\n".as_bytes(),
            &RiceOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }
}
