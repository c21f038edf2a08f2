//! Round-complexity of k-set agreement in the KNOW-ALL dynamic-network model.
//!
//! Both directions of the tight bound are mechanized:
//!
//! * [`dyngraph`] computes the information-flow closures `H_r` of a graph
//!   sequence and their domination numbers, which give the bound `r`.
//! * [`protocol`] runs full-information executions, including the flooding
//!   algorithm that solves k-set agreement in `r` rounds.
//! * [`kuhn`] and [`refuter`] take any candidate algorithm with a budget below
//!   `r`, color the Kuhn triangulation with its decisions, locate a
//!   panchromatic simplex and turn it into a re-simulated violation witness.
//! * [`oracle`] holds brute-force baselines used by tests and the `check` command.

pub mod dyngraph;
pub mod error;
pub mod kuhn;
pub mod oracle;
pub mod protocol;
pub mod refuter;

pub use dyngraph::{
    bound, closure, graph_at, greedy_dominating_set, min_dominating_set,
    min_dominating_set_with_cap, min_rounds, Bound, Digraph, DominatingSetResult,
    DynamicGraphSpec, Extension, DEFAULT_EXACT_CAP, DEFAULT_MAX_ROUNDS,
};
pub use error::{Error, Result};
pub use kuhn::{
    assign_node, carrier, check_sperner, color, find_panchromatic, inp, primitive_simplices,
    vertices, Carrier, LatticeVertex, NodeAssigner, PrimitiveSimplex, SpernerReport,
};
pub use protocol::{
    builtin_algorithms, flood_solve, run, view_of, Algorithm, Builtin, FloodSolution,
    InputConfig, OutcomeReport, Value, View,
};
pub use refuter::{certify, refute, CertifyOutcome, Witness, WitnessKind};
