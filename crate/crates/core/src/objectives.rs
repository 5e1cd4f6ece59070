//! Scalar objectives and fairness metrics over a coverage model.
//!
//! Group utilities come in two flavours: raw expected counts
//! `f(S; V_i)` and normalized fractions `f(S; V_i) / |V_i|`. Disparity and
//! the saturated coverage objective are defined on normalized values; the
//! concave surrogate uses raw counts unless asked to normalize.

use std::fmt;

use crate::coverage::{CoverageModel, CoverageState};
use crate::error::{Error, Result};
use crate::graph::GroupAssignment;

/// Non-negative, non-decreasing concave `H` with `H(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConcaveFn {
    /// `ln(1 + z)`
    Log1p,
    Sqrt,
    /// `z^(1/r)`, `r >= 2`
    Root(u32),
}

impl ConcaveFn {
    pub fn eval(self, z: f64) -> f64 {
        match self {
            ConcaveFn::Log1p => z.ln_1p(),
            ConcaveFn::Sqrt => z.sqrt(),
            ConcaveFn::Root(r) => z.powf(1.0 / r as f64),
        }
    }

    pub fn root(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidArgument(format!(
                "root order must be >= 2, got {r}"
            )));
        }
        Ok(ConcaveFn::Root(r))
    }
}

impl fmt::Display for ConcaveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConcaveFn::Log1p => f.write_str("log1p"),
            ConcaveFn::Sqrt => f.write_str("sqrt"),
            ConcaveFn::Root(r) => write!(f, "pow{r}"),
        }
    }
}

/// Budget-mode objective.
#[derive(Clone, Debug, PartialEq)]
pub enum ObjectiveSpec {
    /// Expected number of influenced nodes.
    Total,
    /// `Σ_i λ_i · H(g_i)` with `g_i` the raw (or normalized) utility of group `i`.
    ConcaveSum {
        h: ConcaveFn,
        lambda: Vec<f64>,
        normalize: bool,
    },
}

impl ObjectiveSpec {
    /// Concave surrogate with unit weights over raw utilities.
    pub fn concave(h: ConcaveFn, k: usize) -> Self {
        ObjectiveSpec::ConcaveSum {
            h,
            lambda: vec![1.0; k],
            normalize: false,
        }
    }

    pub fn check(&self, k: usize) -> Result<()> {
        if let ObjectiveSpec::ConcaveSum { lambda, .. } = self {
            if lambda.len() != k {
                return Err(Error::InvalidArgument(format!(
                    "lambda has {} entries but there are {k} groups",
                    lambda.len()
                )));
            }
            if lambda.iter().any(|&l| !(l >= 0.0) || !l.is_finite()) {
                return Err(Error::InvalidArgument(
                    "lambda weights must be finite and >= 0".into(),
                ));
            }
        }
        Ok(())
    }

    /// Objective value given raw per-group utilities.
    pub fn value(&self, utilities: &[f64], sizes: &[usize]) -> f64 {
        match self {
            ObjectiveSpec::Total => utilities.iter().sum(),
            ObjectiveSpec::ConcaveSum {
                h,
                lambda,
                normalize,
            } => utilities
                .iter()
                .zip(sizes)
                .zip(lambda)
                .map(|((&u, &size), &l)| {
                    let g = if *normalize { u / size as f64 } else { u };
                    l * h.eval(g)
                })
                .sum(),
        }
    }

    /// Short method label used in reports.
    pub fn label(&self) -> String {
        match self {
            ObjectiveSpec::Total => "plain".into(),
            ObjectiveSpec::ConcaveSum { h, .. } => format!("fair-{h}"),
        }
    }
}

/// Per-group quota for the saturated coverage objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoverageSpec {
    quota: f64,
}

impl CoverageSpec {
    pub fn new(quota: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&quota) {
            return Err(Error::InvalidArgument(format!(
                "quota {quota} outside [0,1]"
            )));
        }
        Ok(Self { quota })
    }

    pub fn quota(&self) -> f64 {
        self.quota
    }

    /// `Σ_i min(u_i, Q)` over normalized utilities.
    pub fn value(&self, normalized: &[f64]) -> f64 {
        normalized.iter().map(|&u| u.min(self.quota)).sum()
    }
}

fn state<'m, M: CoverageModel>(
    model: &'m M,
    groups: &GroupAssignment,
    seeds: &[usize],
) -> Result<CoverageState<'m, M>> {
    CoverageState::with_seeds(model, groups, seeds)
}

/// Normalized utility `f(S; V_i) / |V_i|` of every group.
pub fn group_utilities<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
) -> Result<Vec<f64>> {
    Ok(state(model, groups, seeds)?.normalized_utilities())
}

/// Largest pairwise gap between normalized group utilities.
pub fn disparity(group_utils: &[f64]) -> Result<f64> {
    if group_utils.is_empty() {
        return Err(Error::InvalidArgument(
            "disparity of an empty utility vector".into(),
        ));
    }
    Ok(max_minus_min(group_utils))
}

pub(crate) fn max_minus_min(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

pub fn eval_concave_surrogate<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
    spec: &ObjectiveSpec,
) -> Result<f64> {
    if !matches!(spec, ObjectiveSpec::ConcaveSum { .. }) {
        return Err(Error::InvalidArgument(
            "concave surrogate needs a concave objective".into(),
        ));
    }
    spec.check(groups.num_groups())?;
    let st = state(model, groups, seeds)?;
    Ok(spec.value(&st.group_utilities(), st.group_sizes()))
}

/// `Σ_i min(f(S; V_i) / |V_i|, Q)`, in `[0, k·Q]`.
pub fn eval_saturated_coverage<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
    cov: &CoverageSpec,
) -> Result<f64> {
    Ok(cov.value(&group_utilities(model, groups, seeds)?))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be >= 0, got {gamma}"
        )));
    }
    Ok(())
}

/// Total utility minus `γ` times disparity. Reporting only.
pub fn eval_penalized_budget<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
    gamma: f64,
) -> Result<f64> {
    check_gamma(gamma)?;
    let st = state(model, groups, seeds)?;
    let total: f64 = st.group_utilities().iter().sum();
    Ok(total - gamma * max_minus_min(&st.normalized_utilities()))
}

/// `|S|` plus `γ` times disparity. Reporting only.
pub fn eval_penalized_cover<M: CoverageModel>(
    model: &M,
    groups: &GroupAssignment,
    seeds: &[usize],
    gamma: f64,
) -> Result<f64> {
    check_gamma(gamma)?;
    let st = state(model, groups, seeds)?;
    Ok(st.seeds().len() as f64 + gamma * max_minus_min(&st.normalized_utilities()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::{build_sample_bank, Deadline, SampleBank};
    use crate::graph::{Edge, Graph};
    use proptest::prelude::*;

    fn chain4() -> (Graph, GroupAssignment) {
        let g = Graph::new(
            4,
            vec![
                Edge::new(0, 1, 1.0),
                Edge::new(1, 2, 1.0),
                Edge::new(2, 3, 1.0),
            ],
        )
        .unwrap();
        (g, GroupAssignment::new(vec![0, 0, 1, 1]).unwrap())
    }

    fn bank(g: &Graph, tau: u32) -> SampleBank {
        build_sample_bank(g, Deadline::Finite(tau), 10, 0).unwrap()
    }

    #[test]
    fn group_utility_examples() {
        let (g, groups) = chain4();
        let b = bank(&g, 2);
        assert_eq!(group_utilities(&b, &groups, &[0]).unwrap(), vec![1.0, 0.5]);
        assert_eq!(
            group_utilities(&b, &groups, &[0, 1, 2, 3]).unwrap(),
            vec![1.0, 1.0]
        );
        let zero = bank(&g, 0);
        assert_eq!(
            group_utilities(&zero, &groups, &[1]).unwrap(),
            vec![0.5, 0.0]
        );
        let bad = GroupAssignment::new(vec![0, 1, 1]).unwrap();
        assert!(group_utilities(&b, &bad, &[0]).is_err());
    }

    #[test]
    fn disparity_examples() {
        assert_eq!(disparity(&[0.36, 0.0]).unwrap(), 0.36);
        assert_eq!(disparity(&[0.25; 4]).unwrap(), 0.0);
        assert!((disparity(&[0.1, 0.5, 0.3]).unwrap() - 0.4).abs() < 1e-15);
        assert!(disparity(&[]).is_err());
    }

    #[test]
    fn concave_value_examples() {
        let spec = ObjectiveSpec::concave(ConcaveFn::Sqrt, 2);
        assert_eq!(spec.value(&[4.0, 9.0], &[10, 10]), 5.0);
        for h in [ConcaveFn::Log1p, ConcaveFn::Sqrt, ConcaveFn::Root(3)] {
            assert_eq!(h.eval(0.0), 0.0);
        }
        // group 1 untouched contributes H(0) = 0
        let (g, groups) = chain4();
        let b = bank(&g, 0);
        let spec = ObjectiveSpec::concave(ConcaveFn::Log1p, 2);
        let v = eval_concave_surrogate(&b, &groups, &[0], &spec).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        let short = ObjectiveSpec::ConcaveSum {
            h: ConcaveFn::Sqrt,
            lambda: vec![1.0],
            normalize: false,
        };
        assert!(eval_concave_surrogate(&b, &groups, &[0], &short).is_err());
        assert!(eval_concave_surrogate(&b, &groups, &[0], &ObjectiveSpec::Total).is_err());
        assert!(ConcaveFn::root(1).is_err());
    }

    #[test]
    fn normalized_surrogate() {
        let spec = ObjectiveSpec::ConcaveSum {
            h: ConcaveFn::Sqrt,
            lambda: vec![2.0, 1.0],
            normalize: true,
        };
        assert_eq!(spec.value(&[4.0, 9.0], &[16, 9]), 2.0 * 0.5 + 1.0);
    }

    #[test]
    fn saturated_examples() {
        let (g, groups) = chain4();
        let b = bank(&g, 3);
        let cov = CoverageSpec::new(0.3).unwrap();
        let v = eval_saturated_coverage(&b, &groups, &[0, 1, 2, 3], &cov).unwrap();
        assert_eq!(v, 2.0 * 0.3);
        let zero = CoverageSpec::new(0.0).unwrap();
        assert_eq!(
            eval_saturated_coverage(&b, &groups, &[], &zero).unwrap(),
            0.0
        );
        assert_eq!(
            eval_saturated_coverage(&b, &groups, &[3], &zero).unwrap(),
            0.0
        );
        let cov = CoverageSpec::new(0.2).unwrap();
        assert!((cov.value(&[0.5, 0.1]) - 0.3).abs() < 1e-15);
        assert!(CoverageSpec::new(1.2).is_err());
    }

    #[test]
    fn penalized_examples() {
        let (g, groups) = chain4();
        let b = bank(&g, 1);
        let all = [0, 1, 2, 3];
        assert_eq!(eval_penalized_budget(&b, &groups, &[0], 0.0).unwrap(), 2.0);
        assert_eq!(eval_penalized_budget(&b, &groups, &all, 5.0).unwrap(), 4.0);
        // seeds {0}: utilities (1.0, 0.0) -> disparity 1
        assert_eq!(eval_penalized_budget(&b, &groups, &[0], 0.5).unwrap(), 1.5);
        assert_eq!(
            eval_penalized_cover(&b, &groups, &[0, 1], 0.0).unwrap(),
            2.0
        );
        assert_eq!(eval_penalized_cover(&b, &groups, &all, 3.0).unwrap(), 4.0);
        assert_eq!(eval_penalized_cover(&b, &groups, &[0], 10.0).unwrap(), 11.0);
        assert!(eval_penalized_cover(&b, &groups, &[0], -1.0).is_err());
    }

    #[test]
    fn penalized_arithmetic_from_table_values() {
        // 38 nodes, total normalized 0.24, disparity 0.36
        let total: f64 = 0.24 * 38.0;
        for gamma in [0.0f64, 1.0, 10.0] {
            let p3 = total - gamma * 0.36;
            assert!((p3 - (9.12 - 0.36 * gamma)).abs() < 1e-12);
        }
        // |S| = 3, utilities (0.5, 0.3), gamma 10
        assert!((3.0 + 10.0 * disparity(&[0.5, 0.3]).unwrap() - 5.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn concave_fns_are_monotone_concave(a in 0.0f64..1e4, b in 0.0f64..1e4, r in 2u32..6) {
            for h in [ConcaveFn::Log1p, ConcaveFn::Sqrt, ConcaveFn::Root(r)] {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(h.eval(lo) <= h.eval(hi));
                let mid = h.eval((a + b) / 2.0);
                prop_assert!(mid + 1e-12 >= (h.eval(a) + h.eval(b)) / 2.0);
            }
        }

        #[test]
        fn disparity_shift_invariant(v in proptest::collection::vec(0.0f64..1.0, 1..6), c in -0.5f64..0.5) {
            let d = disparity(&v).unwrap();
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            prop_assert!((disparity(&shifted).unwrap() - d).abs() < 1e-12);
            let pairwise = v.iter().flat_map(|a| v.iter().map(move |b| (a - b).abs())).fold(0.0, f64::max);
            prop_assert_eq!(d, pairwise);
        }
    }
}
