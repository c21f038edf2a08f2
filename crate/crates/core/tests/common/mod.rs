#![allow(dead_code)]

use kset_core::{DynamicGraphSpec, Extension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The bundled family of (name, graph, k) instances.
pub fn family() -> Vec<(String, DynamicGraphSpec, usize)> {
    let mut out = Vec::new();
    let c5 = DynamicGraphSpec::directed_cycle(5).unwrap();
    for k in [1, 2] {
        out.push((format!("C5 k={k}"), c5.clone(), k));
    }
    for n in [3, 4, 5] {
        let kn = DynamicGraphSpec::complete(n).unwrap();
        for k in [1, 2] {
            out.push((format!("K{n} k={k}"), kn.clone(), k));
        }
    }
    let p4 = DynamicGraphSpec::directed_path(4).unwrap();
    for k in [1, 2] {
        out.push((format!("P4 k={k}"), p4.clone(), k));
    }
    out.push(("cycling-3 k=1".into(), cycling_sequence(), 1));
    out
}

/// Three alternating matchings on 4 nodes, repeated.
pub fn cycling_sequence() -> DynamicGraphSpec {
    DynamicGraphSpec::new(
        4,
        vec![
            vec![(1, 2), (3, 4)],
            vec![(2, 3), (4, 1)],
            vec![(3, 1), (4, 2)],
        ],
        Extension::Cycle,
    )
    .unwrap()
}

/// Random spec with `n` nodes, 1..=3 explicit rounds and arc density `p`.
pub fn random_spec(seed: u64, n: usize, p: f64) -> DynamicGraphSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(1..=3);
    let rounds = (0..m)
        .map(|_| {
            let mut arcs = Vec::new();
            for u in 1..=n {
                for v in 1..=n {
                    if u != v && rng.random_bool(p) {
                        arcs.push((u, v));
                    }
                }
            }
            arcs
        })
        .collect();
    let ext = if rng.random_bool(0.5) {
        Extension::RepeatLast
    } else {
        Extension::Cycle
    };
    DynamicGraphSpec::new(n, rounds, ext).unwrap()
}
