mod common;

use std::collections::BTreeSet;

use kset_core::oracle::exhaustive_check;
use kset_core::{
    builtin_algorithms, min_rounds, refute, run, Builtin, Error, WitnessKind, DEFAULT_MAX_ROUNDS,
};
use proptest::prelude::*;

use common::{family, random_spec};

#[test]
fn every_validity_respecting_builtin_is_refuted_one_round_early() {
    for (name, spec, k) in family() {
        let budget = min_rounds(&spec, k, DEFAULT_MAX_ROUNDS).unwrap() - 1;
        for alg in builtin_algorithms().iter().filter(|a| a.validity_respecting()) {
            let w = refute(&spec, k, alg.as_ref(), budget).unwrap();
            assert_eq!(w.kind, WitnessKind::AgreementViolation, "{name} {}", alg.name());
            assert!(w.verified);
            assert_eq!(w.nodes.len(), k + 1);
            let distinct: BTreeSet<_> = w.outputs.iter().collect();
            assert_eq!(distinct.len(), k + 1);

            let replay = run(&spec, k, alg.as_ref(), &w.config, budget).unwrap();
            for (node, out) in w.nodes.iter().zip(&w.outputs) {
                assert_eq!(replay.outputs[node - 1], *out);
            }

            // the witness configuration is among the exhaustive failures
            let report = exhaustive_check(&spec, k, alg.as_ref(), budget).unwrap();
            assert!(report.failures.iter().any(|f| f.config == w.config));
        }
    }
}

#[test]
fn refutation_is_deterministic_across_pool_sizes() {
    let spec = kset_core::DynamicGraphSpec::directed_cycle(5).unwrap();
    let alg = Builtin::MajorityHeard.instantiate();
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| refute(&spec, 2, alg.as_ref(), 1).unwrap());
    let wide = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| refute(&spec, 2, alg.as_ref(), 1).unwrap());
    assert_eq!(serial, wide);
    assert_eq!(serial, refute(&spec, 2, alg.as_ref(), 1).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn refutes_below_the_bound_on_random_graphs(seed: u64, n in 2usize..=6, p in 0.1f64..0.5, k in 1usize..=2) {
        let spec = random_spec(seed, n, p);
        let Ok(r) = min_rounds(&spec, k, 10) else {
            return Ok(());
        };
        prop_assume!(n > k);
        for budget in 0..r {
            for alg in builtin_algorithms() {
                match refute(&spec, k, alg.as_ref(), budget) {
                    Ok(w) => {
                        prop_assert!(w.verified);
                        if alg.validity_respecting() {
                            prop_assert_eq!(w.kind, WitnessKind::AgreementViolation);
                        }
                    }
                    Err(Error::LemmaFalsified(msg)) => prop_assert!(false, "{}", msg),
                    Err(e) => prop_assert!(false, "unexpected error {}", e),
                }
            }
        }
        let at_bound = refute(&spec, k, builtin_algorithms()[1].as_ref(), r);
        let refused = matches!(at_bound, Err(Error::BudgetNotBelowBound { .. }));
        prop_assert!(refused);
    }
}
