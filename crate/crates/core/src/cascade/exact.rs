use indexmap::IndexMap;

use super::{check_nodes, Deadline};
use crate::coverage::{CoverageModel, Weighting};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::{self, NodeSet};

/// Largest edge count accepted by the enumeration routines.
pub const MAX_EXACT_EDGES: usize = 22;

fn check_size(graph: &Graph) -> Result<()> {
    if graph.num_edges() > MAX_EXACT_EDGES {
        return Err(Error::InstanceTooLarge(format!(
            "{} edges, enumeration limit is {MAX_EXACT_EDGES}",
            graph.num_edges()
        )));
    }
    Ok(())
}

/// Probability of the live-edge configuration `mask` (bit `j` = edge `j` of
/// [`Graph::edges`] is live).
fn config_probability(graph: &Graph, mask: u32) -> f64 {
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(j, e)| if mask >> j & 1 == 1 { e.p } else { 1.0 - e.p })
        .product()
}

/// Nodes within live distance `deadline` of `sources` under configuration `mask`.
fn reached(graph: &Graph, mask: u32, sources: &[usize], deadline: Deadline) -> Vec<bool> {
    let n = graph.num_nodes();
    let mut hit = vec![false; n];
    let mut frontier: Vec<usize> = Vec::new();
    for &s in sources {
        if !hit[s] {
            hit[s] = true;
            frontier.push(s);
        }
    }
    let mut step = 0;
    while !frontier.is_empty() && deadline.admits(step + 1) {
        step += 1;
        let mut next = Vec::new();
        for (j, e) in graph.edges().iter().enumerate() {
            if mask >> j & 1 == 1 && !hit[e.dst] && frontier.contains(&e.src) {
                hit[e.dst] = true;
                next.push(e.dst);
            }
        }
        frontier = next;
    }
    hit
}

/// Exact `E[#targets activated by the deadline]`, summing over all
/// `2^|E|` live-edge configurations.
pub fn exact_utility(
    graph: &Graph,
    seeds: &[usize],
    deadline: Deadline,
    targets: &NodeSet,
) -> Result<f64> {
    check_size(graph)?;
    check_nodes(seeds, graph.num_nodes())?;
    let m = graph.num_edges();
    let mut total = 0.0;
    for mask in 0..(1u32 << m) {
        let prob = config_probability(graph, mask);
        if prob == 0.0 {
            continue;
        }
        let hit = reached(graph, mask, seeds, deadline);
        let count = targets.iter().filter(|&v| hit[v]).count();
        total += prob * count as f64;
    }
    Ok(total)
}

/// Every distinct live-edge reach profile of a tiny graph with its exact
/// probability. Implements [`CoverageModel`], so the greedy solvers can run
/// against exact utilities.
#[derive(Clone, Debug)]
pub struct ExactModel {
    n: usize,
    set_words: usize,
    weights: Vec<f64>,
    /// `[scenario][node][word]`
    reach: Vec<u64>,
}

impl ExactModel {
    pub fn build(graph: &Graph, deadline: Deadline) -> Result<Self> {
        check_size(graph)?;
        let n = graph.num_nodes();
        let set_words = nodeset::words_for(n);
        let mut profiles: IndexMap<Vec<u64>, f64> = IndexMap::new();
        for mask in 0..(1u32 << graph.num_edges()) {
            let prob = config_probability(graph, mask);
            if prob == 0.0 {
                continue;
            }
            let mut table = vec![0u64; n * set_words];
            for v in 0..n {
                let row = &mut table[v * set_words..(v + 1) * set_words];
                for (u, hit) in reached(graph, mask, &[v], deadline).into_iter().enumerate() {
                    if hit {
                        nodeset::insert(row, u);
                    }
                }
            }
            *profiles.entry(table).or_insert(0.0) += prob;
        }
        let mut weights = Vec::with_capacity(profiles.len());
        let mut reach = Vec::with_capacity(profiles.len() * n * set_words);
        for (table, w) in profiles {
            weights.push(w);
            reach.extend(table);
        }
        Ok(Self {
            n,
            set_words,
            weights,
            reach,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl CoverageModel for ExactModel {
    fn num_nodes(&self) -> usize {
        self.n
    }

    fn num_scenarios(&self) -> usize {
        self.weights.len()
    }

    fn reach(&self, scenario: usize, node: usize) -> &[u64] {
        let start = (scenario * self.n + node) * self.set_words;
        &self.reach[start..start + self.set_words]
    }

    fn weighting(&self) -> Weighting<'_> {
        Weighting::Explicit(&self.weights)
    }
}
