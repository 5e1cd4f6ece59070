//! Weighted coverage over reach scenarios.
//!
//! A [`CoverageModel`] is a list of scenarios, each assigning every node a
//! reach set, with a probability weight per scenario. Expected group
//! coverage of a seed set `S` is `Σ_s w_s · |∪_{v ∈ S} reach(s, v) ∩ V_i|`.
//! Both the Monte-Carlo [`SampleBank`](crate::cascade::SampleBank) and the
//! exact [`ExactModel`](crate::cascade::ExactModel) expose this shape,
//! which is what the objectives and solvers consume.

use crate::cascade::check_nodes;
use crate::error::{Error, Result};
use crate::graph::GroupAssignment;
use crate::nodeset::{self, NodeSet};

pub enum Weighting<'a> {
    /// Every scenario weighs `1 / N`.
    Uniform(usize),
    Explicit(&'a [f64]),
}

pub trait CoverageModel: Sync {
    fn num_nodes(&self) -> usize;
    fn num_scenarios(&self) -> usize;
    /// Reach bitset of `node` in `scenario`, `words_for(num_nodes)` words long.
    fn reach(&self, scenario: usize, node: usize) -> &[u64];
    fn weighting(&self) -> Weighting<'_>;
}

/// Incrementally maintained coverage of a growing seed set.
///
/// With uniform weights the per-group mass is an integer count summed over
/// scenarios, so gains and utilities on a sample bank are exact rationals
/// up to one final division.
pub struct CoverageState<'m, M: CoverageModel + ?Sized> {
    model: &'m M,
    masks: Vec<Vec<u64>>,
    sizes: Vec<usize>,
    covered: Vec<u64>,
    set_words: usize,
    seeds: Vec<usize>,
    chosen: NodeSet,
    mass: Vec<f64>,
    scale: f64,
}

impl<'m, M: CoverageModel + ?Sized> CoverageState<'m, M> {
    pub fn new(model: &'m M, groups: &GroupAssignment) -> Result<Self> {
        let n = model.num_nodes();
        if groups.num_nodes() != n {
            return Err(Error::SizeMismatch {
                groups: groups.num_nodes(),
                nodes: n,
            });
        }
        let set_words = nodeset::words_for(n);
        let scale = match model.weighting() {
            Weighting::Uniform(samples) => 1.0 / samples as f64,
            Weighting::Explicit(_) => 1.0,
        };
        Ok(Self {
            model,
            masks: (0..groups.num_groups())
                .map(|i| groups.mask(i).words().to_vec())
                .collect(),
            sizes: groups.sizes().to_vec(),
            covered: vec![0; model.num_scenarios() * set_words],
            set_words,
            seeds: Vec::new(),
            chosen: NodeSet::new(n),
            mass: vec![0.0; groups.num_groups()],
            scale,
        })
    }

    /// State after adding `seeds` in order.
    pub fn with_seeds(model: &'m M, groups: &GroupAssignment, seeds: &[usize]) -> Result<Self> {
        check_nodes(seeds, model.num_nodes())?;
        let mut state = Self::new(model, groups)?;
        for &v in seeds {
            state.add(v);
        }
        Ok(state)
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn contains(&self, v: usize) -> bool {
        self.chosen.contains(v)
    }

    pub fn group_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_nodes(&self) -> usize {
        self.model.num_nodes()
    }

    /// Expected covered count per group.
    pub fn group_utilities(&self) -> Vec<f64> {
        self.mass.iter().map(|m| m * self.scale).collect()
    }

    /// Expected covered fraction per group.
    pub fn normalized_utilities(&self) -> Vec<f64> {
        self.mass
            .iter()
            .zip(&self.sizes)
            .map(|(m, &s)| m * self.scale / s as f64)
            .collect()
    }

    /// Per-group mass newly covered if `v` joined the seed set.
    fn gain_mass(&self, v: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        let w = self.set_words;
        let weights = match self.model.weighting() {
            Weighting::Uniform(_) => None,
            Weighting::Explicit(ws) => Some(ws),
        };
        let mut counts = vec![0usize; self.masks.len()];
        for s in 0..self.model.num_scenarios() {
            let reach = self.model.reach(s, v);
            let covered = &self.covered[s * w..(s + 1) * w];
            counts.iter_mut().for_each(|c| *c = 0);
            for (i, (&r, &c)) in reach.iter().zip(covered).enumerate() {
                let fresh = r & !c;
                if fresh == 0 {
                    continue;
                }
                for (count, mask) in counts.iter_mut().zip(&self.masks) {
                    *count += (fresh & mask[i]).count_ones() as usize;
                }
            }
            match weights {
                None => out
                    .iter_mut()
                    .zip(&counts)
                    .for_each(|(o, &c)| *o += c as f64),
                Some(ws) => out
                    .iter_mut()
                    .zip(&counts)
                    .for_each(|(o, &c)| *o += ws[s] * c as f64),
            }
        }
    }

    /// Group utilities the state would have after adding `v`.
    pub fn utilities_with(&self, v: usize) -> Vec<f64> {
        let mut delta = vec![0.0; self.mass.len()];
        self.gain_mass(v, &mut delta);
        self.mass
            .iter()
            .zip(&delta)
            .map(|(m, d)| (m + d) * self.scale)
            .collect()
    }

    pub fn add(&mut self, v: usize) {
        if self.chosen.contains(v) {
            return;
        }
        let mut delta = vec![0.0; self.mass.len()];
        self.gain_mass(v, &mut delta);
        for (m, d) in self.mass.iter_mut().zip(&delta) {
            *m += d;
        }
        let w = self.set_words;
        for s in 0..self.model.num_scenarios() {
            nodeset::union_into(
                &mut self.covered[s * w..(s + 1) * w],
                self.model.reach(s, v),
            );
        }
        self.seeds.push(v);
        self.chosen.insert(v);
    }
}

impl<M: CoverageModel + ?Sized> Clone for CoverageState<'_, M> {
    fn clone(&self) -> Self {
        Self {
            model: self.model,
            masks: self.masks.clone(),
            sizes: self.sizes.clone(),
            covered: self.covered.clone(),
            set_words: self.set_words,
            seeds: self.seeds.clone(),
            chosen: self.chosen.clone(),
            mass: self.mass.clone(),
            scale: self.scale,
        }
    }
}

/// Expected covered count per group for `seeds`.
pub fn group_coverage<M: CoverageModel + ?Sized>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
) -> Result<Vec<f64>> {
    Ok(CoverageState::with_seeds(model, groups, seeds)?.group_utilities())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{build_sample_bank, Deadline};
    use crate::graph::{Edge, Graph};

    #[test]
    fn incremental_matches_direct_estimate() {
        let g = Graph::new(
            6,
            vec![
                Edge::new(0, 1, 0.5),
                Edge::new(1, 2, 0.5),
                Edge::new(3, 4, 0.8),
                Edge::new(4, 5, 0.2),
                Edge::new(2, 3, 0.6),
            ],
        )
        .unwrap();
        let groups = GroupAssignment::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
        let bank = build_sample_bank(&g, Deadline::Finite(2), 300, 5).unwrap();
        let state = CoverageState::with_seeds(&bank, &groups, &[0, 4]).unwrap();
        for i in 0..2 {
            let direct = bank
                .estimate_utility(&[0, 4], &groups.mask(i))
                .unwrap()
                .mean;
            assert!((state.group_utilities()[i] - direct).abs() < 1e-12);
        }
        let predicted = state.utilities_with(2);
        let mut grown = state.clone();
        grown.add(2);
        assert_eq!(predicted, grown.group_utilities());
        // re-adding is a no-op
        grown.add(2);
        assert_eq!(grown.seeds(), &[0, 4, 2]);
    }

    #[test]
    fn empty_seed_set_covers_nothing() {
        let g = Graph::new(3, vec![Edge::new(0, 1, 1.0)]).unwrap();
        let groups = GroupAssignment::single(3).unwrap();
        let bank = build_sample_bank(&g, Deadline::Unbounded, 3, 0).unwrap();
        assert_eq!(group_coverage(&bank, &groups, &[]).unwrap(), vec![0.0]);
    }
}
