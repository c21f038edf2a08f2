mod common;

use std::collections::VecDeque;

use itertools::Itertools;
use kset_core::oracle::brute_domination;
use kset_core::{
    closure, greedy_dominating_set, min_dominating_set, Digraph, DynamicGraphSpec,
};
use proptest::prelude::*;

use common::random_spec;

/// Directed BFS distances from `src` in `g`.
fn bfs(g: &Digraph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n() + 1];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        for v in g.out_neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Lexicographically first minimum dominating set by plain enumeration.
fn lex_first_min(h: &Digraph) -> Vec<usize> {
    let n = h.n();
    for size in 0..=n {
        if let Some(set) = (1..=n)
            .combinations(size)
            .find(|s| (1..=n).all(|v| s.iter().any(|&u| u == v || h.has_arc(u, v))))
        {
            return set;
        }
    }
    unreachable!()
}

#[test]
fn c5_tie_break_matches_enumeration() {
    let spec = DynamicGraphSpec::directed_cycle(5).unwrap();
    for r in 1..=4 {
        let h = closure(&spec, r);
        assert_eq!(min_dominating_set(&h).unwrap().members, lex_first_min(&h), "r={r}");
    }
    assert_eq!(lex_first_min(&closure(&spec, 1)), vec![1, 2, 4]);
    assert_eq!(lex_first_min(&closure(&spec, 2)), vec![1, 3]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closures_grow_and_domination_shrinks(seed: u64, n in 2usize..=8, p in 0.05f64..0.5) {
        let spec = random_spec(seed, n, p);
        let hs: Vec<Digraph> = spec.closures().take(7).collect();
        let mut last_gamma = usize::MAX;
        for (r, h) in hs.iter().enumerate() {
            prop_assert!(h.has_all_self_arcs(), "H_{} misses a self-arc", r);
            prop_assert_eq!(h, &closure(&spec, r));
            if r > 0 {
                for (u, v) in hs[r - 1].arcs() {
                    prop_assert!(h.has_arc(u, v));
                }
            }
            let gamma = min_dominating_set(h).unwrap().size;
            prop_assert!(gamma <= last_gamma);
            last_gamma = gamma;
        }
    }

    #[test]
    fn static_closure_is_bounded_distance(seed: u64, n in 2usize..=8, p in 0.05f64..0.5, r in 0usize..6) {
        let g = random_spec(seed, n, p).rounds()[0].clone();
        let spec = DynamicGraphSpec::constant(n, g.arcs().collect()).unwrap();
        let h = closure(&spec, r);
        for u in 1..=n {
            let dist = bfs(&g, u);
            for (v, d) in dist.iter().enumerate().skip(1) {
                prop_assert_eq!(h.has_arc(u, v), d.is_some_and(|d| d <= r));
            }
        }
    }

    #[test]
    fn exact_matches_enumeration(seed: u64, n in 2usize..=5, p in 0.0f64..0.6, r in 0usize..3) {
        let h = closure(&random_spec(seed, n, p), r);
        let exact = min_dominating_set(&h).unwrap();
        prop_assert!(exact.exact);
        prop_assert_eq!(exact.size, exact.members.len());
        prop_assert_eq!(exact.size, brute_domination(&h).unwrap());
        prop_assert_eq!(&exact.members, &lex_first_min(&h));
        prop_assert!(h.is_dominating(&exact.members));
    }

    #[test]
    fn greedy_is_an_upper_bound(seed: u64, n in 2usize..=12, p in 0.0f64..0.5, r in 0usize..3) {
        let h = closure(&random_spec(seed, n, p), r);
        let greedy = greedy_dominating_set(&h);
        prop_assert!(!greedy.exact);
        prop_assert!(h.is_dominating(&greedy.members));
        prop_assert!(greedy.size >= min_dominating_set(&h).unwrap().size);
    }
}
