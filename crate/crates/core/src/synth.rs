//! Two-group homophily / heterophily random graphs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, GroupAssignment};

#[derive(Clone, Debug, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    /// Fraction of nodes in group 0.
    pub group_fraction: f64,
    /// Within-group edge probability.
    pub p_hom: f64,
    /// Across-group edge probability.
    pub p_het: f64,
    /// Activation probability placed on every edge.
    pub p_act: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n: 500,
            group_fraction: 0.7,
            p_hom: 0.025,
            p_het: 0.001,
            p_act: 0.05,
            seed: 0,
        }
    }
}

impl SynthConfig {
    /// Exact size of group 0.
    pub fn group0_size(&self) -> usize {
        (self.group_fraction * self.n as f64).round() as usize
    }

    fn check(&self) -> Result<()> {
        for (name, p) in [
            ("p_hom", self.p_hom),
            ("p_het", self.p_het),
            ("p_act", self.p_act),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {p} outside [0,1]"
                )));
            }
        }
        if !(self.group_fraction > 0.0 && self.group_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "group fraction {} outside (0,1)",
                self.group_fraction
            )));
        }
        let g0 = self.group0_size();
        if g0 == 0 || g0 >= self.n {
            return Err(Error::InvalidArgument(format!(
                "degenerate groups: {g0} of {} nodes in group 0",
                self.n
            )));
        }
        Ok(())
    }
}

/// Assigns exactly `round(g·n)` nodes to group 0 by a seeded shuffle, then
/// runs one Bernoulli trial per unordered pair (`p_hom` within a group,
/// `p_het` across). Each success becomes two directed edges carrying
/// `p_act`. Every pair consumes one draw, so the topology for a seed does not
/// depend on `p_act`.
pub fn generate(config: &SynthConfig) -> Result<(Graph, GroupAssignment)> {
    config.check()?;
    let n = config.n;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut labels = vec![1usize; n];
    for &v in &order[..config.group0_size()] {
        labels[v] = 0;
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if labels[u] == labels[v] {
                config.p_hom
            } else {
                config.p_het
            };
            if rng.gen::<f64>() < p {
                edges.push(Edge::new(u, v, config.p_act));
                edges.push(Edge::new(v, u, config.p_act));
            }
        }
    }
    Ok((Graph::new(n, edges)?, GroupAssignment::new(labels)?))
}
