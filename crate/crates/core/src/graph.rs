//! Graph and group data model plus the plain-text interchange formats.
//!
//! Edge-list files start with a `nodes <n>` header, followed by one
//! `src dst p` triple per line (tab or space separated). Lines starting with
//! `#` are comments. Group files carry one `node label` pair per line.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub p: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, p: f64) -> Self {
        Self { src, dst, p }
    }
}

/// Directed graph with per-edge activation probabilities over nodes `0..n`.
///
/// Immutable after construction. Out-adjacency is stored CSR style and holds
/// exactly the edge list regrouped by source, in edge-list order.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adjacency: Vec<(usize, f64)>,
}

impl Graph {
    /// Builds a validated graph. Rejects out-of-range endpoints, probabilities
    /// outside `[0, 1]`, self-loops and duplicate `(src, dst)` pairs.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            check_edge(n, e, &mut seen)
                .map_err(|msg| Error::InvalidArgument(format!("edge {i}: {msg}")))?;
        }
        Ok(Self::from_checked(n, edges))
    }

    fn from_checked(n: usize, edges: Vec<Edge>) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for e in &edges {
            offsets[e.src + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets.clone();
        let mut adjacency = vec![(0, 0.0); edges.len()];
        for e in &edges {
            adjacency[cursor[e.src]] = (e.dst, e.p);
            cursor[e.src] += 1;
        }
        Self {
            n,
            edges,
            offsets,
            adjacency,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Out-neighbours of `v` as `(dst, p)` pairs.
    pub fn out_edges(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Index range of `v`'s out-edges within the CSR arrays. The position of
    /// an edge in [`Graph::csr_edges`] is stable, which lets samplers key
    /// per-edge state by it.
    pub fn out_range(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    pub fn csr_edges(&self) -> &[(usize, f64)] {
        &self.adjacency
    }

    /// Returns a copy with every activation probability replaced by `p`.
    pub fn with_uniform_probability(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!(
                "probability {p} outside [0,1]"
            )));
        }
        let edges = self.edges.iter().map(|e| Edge { p, ..*e }).collect();
        Ok(Self::from_checked(self.n, edges))
    }
}

fn check_edge(
    n: usize,
    e: &Edge,
    seen: &mut HashSet<(usize, usize)>,
) -> std::result::Result<(), String> {
    if e.src >= n || e.dst >= n {
        return Err(format!(
            "endpoint out of range ({} {} with n={n})",
            e.src, e.dst
        ));
    }
    if !(0.0..=1.0).contains(&e.p) {
        return Err("probability out of range".into());
    }
    if e.src == e.dst {
        return Err(format!("self-loop on node {}", e.src));
    }
    if !seen.insert((e.src, e.dst)) {
        return Err(format!("duplicate edge {} {}", e.src, e.dst));
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::io(path, e))
}

/// Loads an edge-list file. With `directed = false` each line `u v p`
/// produces both `(u, v, p)` and `(v, u, p)`.
pub fn load_edge_list(path: impl AsRef<Path>, directed: bool) -> Result<Graph> {
    let path = path.as_ref();
    parse_edge_list(open(path)?, directed).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_edge_list(reader: impl BufRead, directed: bool) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<edge list>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "nodes" {
            if n.is_some() {
                return Err(Error::parse(lineno, "repeated nodes header"));
            }
            if fields.len() != 2 {
                return Err(Error::parse(lineno, "malformed nodes header"));
            }
            let count = fields[1]
                .parse()
                .map_err(|_| Error::parse(lineno, "malformed nodes header"))?;
            n = Some(count);
            continue;
        }
        let Some(n) = n else {
            return Err(Error::parse(lineno, "edge before nodes header"));
        };
        if fields.len() != 3 {
            return Err(Error::parse(lineno, "malformed line"));
        }
        let src: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(lineno, "malformed line"))?;
        let dst: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(lineno, "malformed line"))?;
        let p: f64 = fields[2]
            .parse()
            .map_err(|_| Error::parse(lineno, "malformed line"))?;
        let mut push = |e: Edge| -> Result<()> {
            check_edge(n, &e, &mut seen).map_err(|msg| Error::parse(lineno, msg))?;
            edges.push(e);
            Ok(())
        };
        push(Edge::new(src, dst, p))?;
        if !directed {
            push(Edge::new(dst, src, p))?;
        }
    }
    let n = n.ok_or_else(|| Error::parse(0, "missing nodes header"))?;
    Ok(Graph::from_checked(n, edges))
}

/// Writes `graph` in the directed edge-list format. Probabilities use the
/// shortest decimal form that round-trips to the same `f64`.
pub fn save_edge_list(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_edge_list(graph, &mut w).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_edge_list(graph: &Graph, w: &mut impl Write) -> std::io::Result<()> {
    writeln!(w, "nodes {}", graph.n)?;
    for e in &graph.edges {
        writeln!(w, "{}\t{}\t{}", e.src, e.dst, e.p)?;
    }
    Ok(())
}

/// Partition of the nodes into `k` disjoint, nonempty groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAssignment {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl GroupAssignment {
    /// Labels must be contiguous `0..k` with every group nonempty.
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().max().map_or(0, |&m| m + 1);
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        if let Some(empty) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidArgument(format!(
                "group {empty} has no nodes"
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidArgument(
                "group assignment over zero nodes".into(),
            ));
        }
        Ok(Self { labels, sizes })
    }

    /// Every node in one group.
    pub fn single(n: usize) -> Result<Self> {
        Self::new(vec![0; n])
    }

    pub fn num_groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn members(&self, group: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == group)
            .map(|(v, _)| v)
    }

    pub fn mask(&self, group: usize) -> NodeSet {
        NodeSet::from_nodes(self.labels.len(), self.members(group))
    }

    pub fn check_graph(&self, graph: &Graph) -> Result<()> {
        if self.labels.len() != graph.num_nodes() {
            return Err(Error::SizeMismatch {
                groups: self.labels.len(),
                nodes: graph.num_nodes(),
            });
        }
        Ok(())
    }
}

/// Loads a group file for a graph with `n` nodes. Labels are compacted to
/// `0..k` preserving their numeric order.
pub fn load_groups(path: impl AsRef<Path>, n: usize) -> Result<GroupAssignment> {
    let path = path.as_ref();
    parse_groups(open(path)?, n).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

pub fn parse_groups(reader: impl BufRead, n: usize) -> Result<GroupAssignment> {
    let mut raw: Vec<Option<i64>> = vec![None; n];
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io("<groups>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(lineno, "malformed line"));
        }
        let node: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(lineno, "malformed line"))?;
        let label: i64 = fields[1]
            .parse()
            .map_err(|_| Error::parse(lineno, "malformed line"))?;
        if node >= n {
            return Err(Error::parse(lineno, format!("node {node} out of range")));
        }
        if label < 0 {
            return Err(Error::parse(lineno, format!("negative label {label}")));
        }
        if raw[node].replace(label).is_some() {
            return Err(Error::parse(lineno, format!("duplicate node {node}")));
        }
    }
    if let Some(missing) = raw.iter().position(Option::is_none) {
        return Err(Error::UnassignedNode(missing));
    }
    let raw: Vec<i64> = raw.into_iter().flatten().collect();
    let distinct: Vec<i64> = raw
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let labels = raw
        .iter()
        .map(|l| distinct.binary_search(l).expect("label present"))
        .collect();
    GroupAssignment::new(labels)
}

pub fn save_groups(groups: &GroupAssignment, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    (|| -> std::io::Result<()> {
        for (v, l) in groups.labels.iter().enumerate() {
            writeln!(w, "{v} {l}")?;
        }
        w.flush()
    })()
    .map_err(|e| Error::io(path, e))
}

/// Edge statistics of a grouped graph. All counts are directed edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphReport {
    pub nodes: usize,
    pub edges: usize,
    pub group_sizes: Vec<usize>,
    /// `within[i]`: edges with both endpoints in group `i`.
    pub within: Vec<usize>,
    pub cross: usize,
}

pub fn validate(graph: &Graph, groups: &GroupAssignment) -> Result<GraphReport> {
    groups.check_graph(graph)?;
    let mut within = vec![0; groups.num_groups()];
    let mut cross = 0;
    for e in graph.edges() {
        let (a, b) = (groups.label(e.src), groups.label(e.dst));
        if a == b {
            within[a] += 1;
        } else {
            cross += 1;
        }
    }
    Ok(GraphReport {
        nodes: graph.num_nodes(),
        edges: graph.num_edges(),
        group_sizes: groups.sizes().to_vec(),
        within,
        cross,
    })
}

impl fmt::Display for GraphReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes {}", self.nodes)?;
        writeln!(f, "edges {}", self.edges)?;
        for (i, s) in self.group_sizes.iter().enumerate() {
            writeln!(f, "group {i} size {s}")?;
        }
        for (i, w) in self.within.iter().enumerate() {
            writeln!(f, "within {i} {w}")?;
        }
        writeln!(f, "cross {}", self.cross)
    }
}
