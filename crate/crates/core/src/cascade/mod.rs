//! Independent-cascade diffusion with a deadline.
//!
//! Three routes to the same quantity, the expected number of target nodes
//! activated by the deadline:
//! - [`simulate_cascade`] runs the discrete-time process directly;
//! - [`SampleBank`] freezes `N` live-edge samples and answers queries with
//!   bitset unions, which makes the estimate a deterministic coverage
//!   function of the seed set;
//! - [`exact_utility`] enumerates every live-edge configuration of a tiny
//!   graph.

mod bank;
mod exact;
mod simulate;

use std::fmt;
use std::str::FromStr;

pub use bank::{
    build_sample_bank, BankOptions, SampleBank, UtilityEstimate, DEFAULT_MAX_BANK_BITS,
};
pub use exact::{exact_utility, ExactModel, MAX_EXACT_EDGES};
pub use simulate::{simulate_cascade, CascadeOutcome};

use crate::error::{Error, Result};

/// Time-step cutoff for counting activations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Deadline {
    Finite(u32),
    Unbounded,
}

impl Deadline {
    /// Whether an activation at `time` counts.
    #[inline]
    pub fn admits(self, time: usize) -> bool {
        match self {
            Deadline::Finite(tau) => time <= tau as usize,
            Deadline::Unbounded => true,
        }
    }
}

impl fmt::Display for Deadline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deadline::Finite(t) => write!(f, "{t}"),
            Deadline::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Deadline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "unbounded" => Ok(Deadline::Unbounded),
            t => t.parse().map(Deadline::Finite).map_err(|_| {
                Error::InvalidArgument(format!(
                    "deadline must be a non-negative integer or `inf`, got `{s}`"
                ))
            }),
        }
    }
}

/// Checks that every id in `nodes` is below `n`.
pub(crate) fn check_nodes(nodes: &[usize], n: usize) -> Result<()> {
    match nodes.iter().find(|&&v| v >= n) {
        Some(&node) => Err(Error::NodeOutOfRange { node, n }),
        None => Ok(()),
    }
}
