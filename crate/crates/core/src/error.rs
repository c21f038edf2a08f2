use thiserror::Error;

use crate::protocol::Value;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid input configuration: {0}")]
    InvalidInput(String),

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("no dominating set of size <= {k} in H_r for any r <= {max_rounds}")]
    NotDominatedWithinCap { k: usize, max_rounds: usize },

    #[error("algorithm `{algorithm}` output {value} at node {node}, outside 0..={k}")]
    AlgorithmRange {
        algorithm: String,
        node: usize,
        value: Value,
        k: usize,
    },

    #[error("no node is out of reach of {blockers:?} at vertex {vertex:?}")]
    AssignmentImpossible {
        vertex: Vec<usize>,
        blockers: Vec<usize>,
    },

    #[error("coloring has no panchromatic primitive simplex")]
    NoPanchromaticCell,

    #[error("budget {budget} is not below the bound: H_{budget} has a dominating set of size {gamma} <= k = {k}")]
    BudgetNotBelowBound { budget: usize, gamma: usize, k: usize },

    #[error("view lemma falsified: {0}")]
    LemmaFalsified(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
