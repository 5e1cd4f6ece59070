use rand::Rng;

use super::{check_nodes, Deadline};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodeset::NodeSet;

/// Activation time of every node; `-1` for nodes never activated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CascadeOutcome {
    pub activation_time: Vec<i64>,
}

impl CascadeOutcome {
    /// Number of `targets` activated no later than `deadline`.
    pub fn influenced(&self, deadline: Deadline, targets: &NodeSet) -> usize {
        targets
            .iter()
            .filter(|&v| {
                let t = self.activation_time[v];
                t >= 0 && deadline.admits(t as usize)
            })
            .count()
    }
}

/// Runs one discrete-time independent cascade from `seeds`.
///
/// Nodes activated at step `t - 1` get a single attempt on each out-edge;
/// an inactive node reached by any successful attempt activates at `t`.
pub fn simulate_cascade<R: Rng + ?Sized>(
    graph: &Graph,
    seeds: &[usize],
    rng: &mut R,
) -> Result<CascadeOutcome> {
    let n = graph.num_nodes();
    check_nodes(seeds, n)?;
    if seeds.is_empty() {
        return Err(Error::InvalidArgument(
            "cascade needs at least one seed".into(),
        ));
    }
    let mut time = vec![-1i64; n];
    let mut frontier = Vec::new();
    for &s in seeds {
        if time[s] < 0 {
            time[s] = 0;
            frontier.push(s);
        }
    }
    let mut t = 0i64;
    let mut next = Vec::new();
    while !frontier.is_empty() {
        t += 1;
        for &u in &frontier {
            for &(v, p) in graph.out_edges(u) {
                // the draw happens even when v is already active so the
                // random stream does not depend on attempt order
                let success = rng.gen::<f64>() < p;
                if success && time[v] < 0 {
                    time[v] = t;
                    next.push(v);
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    Ok(CascadeOutcome {
        activation_time: time,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn deterministic_path() {
        let g = Graph::new(3, vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let out = simulate_cascade(&g, &[0], &mut rng).unwrap();
        assert_eq!(out.activation_time, vec![0, 1, 2]);
    }

    #[test]
    fn zero_probabilities() {
        let edges = (0..4).flat_map(|u| {
            (0..5)
                .filter(move |&v| v != u)
                .map(move |v| Edge::new(u, v, 0.0))
        });
        let g = Graph::new(5, edges.collect()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let out = simulate_cascade(&g, &[3], &mut rng).unwrap();
        assert_eq!(out.activation_time, vec![-1, -1, -1, 0, -1]);
    }

    #[test]
    fn bernoulli_edge_rate() {
        let g = Graph::new(2, vec![Edge::new(0, 1, 0.7)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let runs = 20_000;
        let hits = (0..runs)
            .filter(|_| {
                simulate_cascade(&g, &[0], &mut rng)
                    .unwrap()
                    .activation_time[1]
                    == 1
            })
            .count();
        let frac = hits as f64 / runs as f64;
        let sigma = (0.7f64 * 0.3 / runs as f64).sqrt();
        assert!((frac - 0.7).abs() <= 3.0 * sigma, "{frac}");
    }

    #[test]
    fn outcome_invariants() {
        // every activation at t > 0 has an in-neighbour activated at t - 1
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 30;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen::<f64>() < 0.15 {
                    edges.push(Edge::new(u, v, 0.5));
                }
            }
        }
        let g = Graph::new(n, edges).unwrap();
        for _ in 0..200 {
            let out = simulate_cascade(&g, &[0, 5], &mut rng).unwrap();
            for v in 0..n {
                let t = out.activation_time[v];
                assert!(t >= -1 && t < n as i64);
                assert_eq!(t == 0, v == 0 || v == 5);
                if t > 0 {
                    assert!(g
                        .edges()
                        .iter()
                        .any(|e| e.dst == v && out.activation_time[e.src] == t - 1));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_seeds() {
        let g = Graph::new(2, vec![]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            simulate_cascade(&g, &[2], &mut rng),
            Err(Error::NodeOutOfRange { .. })
        ));
        assert!(simulate_cascade(&g, &[], &mut rng).is_err());
    }
}
