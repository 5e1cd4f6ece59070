use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{message}, line {line}")]
    Parse { line: usize, message: String },

    #[error("node {0} unassigned")]
    UnassignedNode(usize),

    #[error("node id {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("group assignment covers {groups} nodes but graph has {nodes}")]
    SizeMismatch { groups: usize, nodes: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample bank needs {needed_bits} bits, above the cap of {cap_bits}")]
    BankTooLarge { needed_bits: u128, cap_bits: u128 },

    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),

    #[error("cover target {target} not reached with {seeds} seeds (achieved {achieved})")]
    CoverNotReached {
        achieved: f64,
        target: f64,
        seeds: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
