//! Benchmark fixtures shared by the criterion benches.

use kset_core::{DynamicGraphSpec, Extension};

/// Directed cycles of growing size.
pub fn cycles() -> Vec<DynamicGraphSpec> {
    [5, 8, 12, 16]
        .into_iter()
        .map(|n| DynamicGraphSpec::directed_cycle(n).unwrap())
        .collect()
}

/// A sparse three-round sequence on `n` nodes: round `t` links `i -> i + t + 1`.
pub fn shifting_sequence(n: usize) -> DynamicGraphSpec {
    let rounds = (1..=3)
        .map(|t| (1..=n).map(|i| (i, (i + t - 1) % n + 1)).filter(|(u, v)| u != v).collect())
        .collect();
    DynamicGraphSpec::new(n, rounds, Extension::Cycle).unwrap()
}
