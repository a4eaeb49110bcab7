use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{0}: no hyperedges")]
    EmptyInput(PathBuf),

    #[error("unknown node id {0}")]
    UnknownNode(u32),

    #[error("hyperedge id {id} out of range (hypergraph has {len} hyperedges)")]
    HyperedgeOutOfRange { id: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("relative difference undefined for reference value 0")]
    ZeroReference,

    #[error("no reachable node pairs")]
    NoReachablePairs,

    #[error("cannot draw from an empty weighted index")]
    EmptyIndex,

    #[error("singular spectrum did not converge after {iterations} iterations")]
    NoConvergence {
        iterations: usize,
        partial: Vec<f64>,
    },

    #[error("rank-deficient regression design: {0}")]
    RankDeficient(String),

    #[error("sample is not a sub-hypergraph: hyperedge {0:?} not found in the original")]
    NotSubset(Vec<u64>),

    #[error("plan error: {0}")]
    Plan(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-readable tag for error JSON documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::EmptyInput(_) => "empty_input",
            Error::UnknownNode(_) => "unknown_node",
            Error::HyperedgeOutOfRange { .. } => "hyperedge_out_of_range",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::EmptyDistribution => "empty_distribution",
            Error::ZeroReference => "zero_reference",
            Error::NoReachablePairs => "no_reachable_pairs",
            Error::EmptyIndex => "empty_index",
            Error::NoConvergence { .. } => "no_convergence",
            Error::RankDeficient(_) => "rank_deficient",
            Error::NotSubset(_) => "not_subset",
            Error::Plan(_) => "plan",
        }
    }
}
