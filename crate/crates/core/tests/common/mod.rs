#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use fairtcim::{Deadline, Edge, Graph, GroupAssignment, NodeSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random directed graph with `n` nodes and at most `max_edges` distinct edges.
/// Probabilities are mostly uniform in (0,1), with some exact 0 and 1.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, max_edges: usize) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(0..=max_edges.min(pairs.len()));
    let edges = pairs[..m]
        .iter()
        .map(|&(u, v)| {
            let p = match rng.gen_range(0..10) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen_range(0.05..0.95),
            };
            Edge::new(u, v, p)
        })
        .collect();
    Graph::new(n, edges).unwrap()
}

/// Random assignment into `k <= n` nonempty groups.
pub fn random_groups<R: Rng>(rng: &mut R, n: usize, k: usize) -> GroupAssignment {
    let mut labels: Vec<usize> = (0..n)
        .map(|v| if v < k { v } else { rng.gen_range(0..k) })
        .collect();
    labels.shuffle(rng);
    GroupAssignment::new(labels).unwrap()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

pub fn random_nonempty_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s = random_subset(rng, n, 0.4);
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn random_deadline<R: Rng>(rng: &mut R) -> Deadline {
    match rng.gen_range(0..6) {
        5 => Deadline::Unbounded,
        t => Deadline::Finite(t),
    }
}

pub fn node_set(n: usize, nodes: &[usize]) -> NodeSet {
    NodeSet::from_nodes(n, nodes.iter().copied())
}

/// Small instance: n in 2..=8, at most 12 edges, 1 to 3 groups.
pub fn small_instance<R: Rng>(rng: &mut R) -> (Graph, GroupAssignment, Deadline) {
    let n = rng.gen_range(2..=8);
    let g = random_graph(rng, n, 12);
    let k = rng.gen_range(1..=3.min(n));
    (g, random_groups(rng, n, k), random_deadline(rng))
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_fairtcim")
}

pub fn fairtcim(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("spawn fairtcim")
}

/// Runs the CLI and panics with stderr on failure.
pub fn fairtcim_ok(args: &[&str]) -> Output {
    let out = fairtcim(args);
    assert!(
        out.status.success(),
        "fairtcim {:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A tiny Rice-style pair of raw files.
pub fn write_rice_fixture(dir: &Path) -> (std::path::PathBuf, std::path::PathBuf) {
    let edges = dir.join("raw_edges.txt");
    let attrs = dir.join("raw_attrs.txt");
    std::fs::write(&edges, "1 2\n2 3\n3 1\n1 4\n4 5\n2 1\n5 6\n").unwrap();
    std::fs::write(
        &attrs,
        "id,dorm,age\n1,a,18\n2,b,20\n3,a,19\n4,c,20\n5,c,22\n6,d,18\n",
    )
    .unwrap();
    (edges, attrs)
}
