use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_nodes, Deadline};
use crate::coverage::{CoverageModel, Weighting};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::{self, NodeSet};

/// Default cap on `N·n²` reach-table bits (2 GiB).
pub const DEFAULT_MAX_BANK_BITS: u128 = 2 * 1024 * 1024 * 1024 * 8;

#[derive(Clone, Debug)]
pub struct BankOptions {
    pub max_bits: u128,
}

impl Default for BankOptions {
    fn default() -> Self {
        Self {
            max_bits: DEFAULT_MAX_BANK_BITS,
        }
    }
}

/// `N` frozen live-edge samples with per-node deadline-truncated reach sets.
///
/// Sample `i` draws its live edges from a ChaCha8 generator seeded with
/// `rng_seed` on stream `i`, visiting edges in CSR order (by source, then
/// insertion order). The bank is therefore a pure function of
/// `(graph, deadline, N, rng_seed)`, independent of thread count, and two
/// banks that differ only in deadline share their live-edge samples.
#[derive(Clone, Debug)]
pub struct SampleBank {
    n: usize,
    num_samples: usize,
    deadline: Deadline,
    rng_seed: u64,
    set_words: usize,
    edge_words: usize,
    /// `[sample][csr edge]` keep bits.
    live: Vec<u64>,
    /// `[sample][node][word]` reach bitsets.
    reach: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UtilityEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub num_samples: usize,
}

pub fn build_sample_bank(
    graph: &Graph,
    deadline: Deadline,
    num_samples: usize,
    rng_seed: u64,
) -> Result<SampleBank> {
    SampleBank::build(
        graph,
        deadline,
        num_samples,
        rng_seed,
        &BankOptions::default(),
    )
}

impl SampleBank {
    pub fn build(
        graph: &Graph,
        deadline: Deadline,
        num_samples: usize,
        rng_seed: u64,
        options: &BankOptions,
    ) -> Result<Self> {
        if num_samples == 0 {
            return Err(Error::InvalidArgument(
                "sample bank needs at least one sample".into(),
            ));
        }
        let n = graph.num_nodes();
        let needed_bits = num_samples as u128 * (n as u128) * (n as u128);
        if needed_bits > options.max_bits {
            return Err(Error::BankTooLarge {
                needed_bits,
                cap_bits: options.max_bits,
            });
        }
        let set_words = nodeset::words_for(n);
        let edge_words = nodeset::words_for(graph.num_edges()).max(1);
        let mut live = vec![0u64; num_samples * edge_words];
        let mut reach = vec![0u64; num_samples * n * set_words];

        let sample_stride = n * set_words;
        if sample_stride > 0 {
            reach
                .par_chunks_mut(sample_stride)
                .zip(live.par_chunks_mut(edge_words))
                .enumerate()
                .for_each(|(s, (reach_s, live_s))| {
                    fill_sample(graph, deadline, rng_seed, s, set_words, reach_s, live_s);
                });
        }

        Ok(Self {
            n,
            num_samples,
            deadline,
            rng_seed,
            set_words,
            edge_words,
            live,
            reach,
        })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn num_samples(&self) -> usize {
        self.num_samples
    }

    pub fn deadline(&self) -> Deadline {
        self.deadline
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    /// Reach bitset of `node` in `sample` as raw words.
    pub fn reach_words(&self, sample: usize, node: usize) -> &[u64] {
        let start = (sample * self.n + node) * self.set_words;
        &self.reach[start..start + self.set_words]
    }

    pub fn reach_set(&self, sample: usize, node: usize) -> NodeSet {
        NodeSet::from_nodes(self.n, nodeset::iter(self.reach_words(sample, node)))
    }

    /// Whether the edge at CSR position `edge` is live in `sample`.
    pub fn is_live(&self, sample: usize, edge: usize) -> bool {
        nodeset::contains(
            &self.live[sample * self.edge_words..(sample + 1) * self.edge_words],
            edge,
        )
    }

    /// Expected number of `targets` activated by the deadline, estimated as
    /// the mean over samples of `|∪_{s ∈ seeds} reach(sample, s) ∩ targets|`.
    pub fn estimate_utility(&self, seeds: &[usize], targets: &NodeSet) -> Result<UtilityEstimate> {
        check_nodes(seeds, self.n)?;
        if targets.capacity() != self.n {
            return Err(Error::SizeMismatch {
                groups: targets.capacity(),
                nodes: self.n,
            });
        }
        if targets.is_empty() {
            return Err(Error::InvalidArgument("target set is empty".into()));
        }
        let mut union = vec![0u64; self.set_words];
        let counts: Vec<f64> = (0..self.num_samples)
            .map(|s| {
                union.iter_mut().for_each(|w| *w = 0);
                for &v in seeds {
                    nodeset::union_into(&mut union, self.reach_words(s, v));
                }
                nodeset::count_and(&union, targets.words()) as f64
            })
            .collect();
        Ok(summarize(&counts))
    }
}

fn summarize(counts: &[f64]) -> UtilityEstimate {
    let n = counts.len();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let std_error = if n > 1 {
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    } else {
        log::warn!("single-sample bank: standard error reported as 0");
        0.0
    };
    UtilityEstimate {
        mean,
        std_error,
        num_samples: n,
    }
}

fn fill_sample(
    graph: &Graph,
    deadline: Deadline,
    rng_seed: u64,
    sample: usize,
    set_words: usize,
    reach: &mut [u64],
    live: &mut [u64],
) {
    let n = graph.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    rng.set_stream(sample as u64);
    for (j, &(_, p)) in graph.csr_edges().iter().enumerate() {
        if rng.gen::<f64>() < p {
            nodeset::insert(live, j);
        }
    }

    // live subgraph as CSR
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for u in 0..n {
        for j in graph.out_range(u) {
            if nodeset::contains(live, j) {
                targets.push(graph.csr_edges()[j].0);
            }
        }
        offsets.push(targets.len());
    }

    let mut depth = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for v in 0..n {
        let out = &mut reach[v * set_words..(v + 1) * set_words];
        depth[v] = 0;
        touched.push(v);
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            nodeset::insert(out, u);
            let d = depth[u] + 1;
            if !deadline.admits(d) {
                continue;
            }
            for &w in &targets[offsets[u]..offsets[u + 1]] {
                if depth[w] == usize::MAX {
                    depth[w] = d;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        for &u in &touched {
            depth[u] = usize::MAX;
        }
        touched.clear();
    }
}

impl CoverageModel for SampleBank {
    fn num_nodes(&self) -> usize {
        self.n
    }

    fn num_scenarios(&self) -> usize {
        self.num_samples
    }

    fn reach(&self, scenario: usize, node: usize) -> &[u64] {
        self.reach_words(scenario, node)
    }

    fn weighting(&self) -> Weighting<'_> {
        Weighting::Uniform(self.num_samples)
    }
}
