//! Both directions of the bound for a concrete candidate algorithm.
//!
//! [`refute`] turns a budget below the bound into a concrete violation: it
//! colors the triangulation with the algorithm's decisions, finds a
//! panchromatic simplex (or a vertex breaking Sperner's condition, which is a
//! validity violation) and re-simulates the resulting configuration from
//! scratch through [`protocol::run`](crate::protocol::run). Nothing from the
//! geometry is trusted when marking a witness verified.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dyngraph::{self, DynamicGraphSpec, DEFAULT_MAX_ROUNDS};
use crate::error::{Error, Result};
use crate::kuhn::{self, DecisionColoring, LatticeVertex, PrimitiveSimplex};
use crate::protocol::{self, Algorithm, InputConfig, OutcomeReport, Simulator, Value};

/// Vertex count above which the triangulation is not colored.
const MAX_VERTICES: u128 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    AgreementViolation,
    ValidityViolation,
}

/// A violation of k-set agreement, checked by direct simulation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub config: InputConfig,
    pub budget: usize,
    pub nodes: Vec<usize>,
    pub outputs: Vec<Value>,
    pub simplex: Option<PrimitiveSimplex>,
    pub verified: bool,
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 - i) / (i + 1))
}

/// Produces a verified witness that `alg` fails k-set agreement at `budget`.
///
/// Fails with [`Error::BudgetNotBelowBound`] when `H_budget` already has a
/// dominating set of size `<= k`, and with [`Error::LemmaFalsified`] if
/// re-simulation disagrees with the construction.
pub fn refute(spec: &DynamicGraphSpec, k: usize, alg: &dyn Algorithm, budget: usize) -> Result<Witness> {
    let n = spec.n();
    let coloring = DecisionColoring::new(spec, k, budget, alg)?;

    let count = binomial(n + k, k);
    if count > MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: "triangulation vertex count",
            size: count,
            cap: MAX_VERTICES,
        });
    }
    let verts: Vec<LatticeVertex> = kuhn::vertices(n, k).collect();
    let colors: Vec<Value> = verts
        .par_iter()
        .map(|v| coloring.color(v))
        .collect::<Result<_>>()?;
    let colors: HashMap<LatticeVertex, Value> = verts.into_iter().zip(colors).collect();
    let color_of = |v: &LatticeVertex| colors[v];

    let sperner = kuhn::check_sperner(n, k, color_of);
    if let Some(bad) = sperner.violations.first() {
        let node = coloring.node(&bad.vertex)?;
        let config = kuhn::inp(&bad.vertex, n);
        let replay = protocol::run(spec, k, alg, &config, budget)?;
        let output = replay.outputs[node - 1];
        if output != bad.color || config.distinct_values().contains(&output) {
            return Err(Error::LemmaFalsified(format!(
                "vertex {} colored {} outside its carrier, but node {node} outputs {output} on {config}",
                bad.vertex, bad.color
            )));
        }
        return Ok(Witness {
            kind: WitnessKind::ValidityViolation,
            config,
            budget,
            nodes: vec![node],
            outputs: vec![output],
            simplex: None,
            verified: true,
        });
    }

    let simplex = kuhn::find_panchromatic(n, k, color_of)?;
    let ys = simplex.vertices();
    let config = kuhn::inp(&ys[0], n);
    let nodes = ys
        .iter()
        .map(|y| coloring.node(y))
        .collect::<Result<Vec<_>>>()?;

    let replay = protocol::run(spec, k, alg, &config, budget)?;
    let outputs: Vec<Value> = nodes.iter().map(|&i| replay.outputs[i - 1]).collect();
    let distinct: BTreeSet<Value> = outputs.iter().copied().collect();
    if distinct.len() != k + 1 {
        return Err(Error::LemmaFalsified(format!(
            "simplex {simplex} is panchromatic, but nodes {nodes:?} output {outputs:?} on {config}"
        )));
    }
    Ok(Witness {
        kind: WitnessKind::AgreementViolation,
        config,
        budget,
        nodes,
        outputs,
        simplex: Some(simplex),
        verified: true,
    })
}

/// Knobs for [`certify`].
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub max_rounds: usize,
    /// Largest `(k+1)^n` checked exhaustively; above it configurations are sampled.
    pub exhaustive_cap: u128,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            max_rounds: DEFAULT_MAX_ROUNDS,
            exhaustive_cap: 1_000_000,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum CertifyOutcome {
    /// Every checked configuration was solved.
    Pass {
        bound: usize,
        configs_checked: u128,
        exhaustive: bool,
    },
    /// Budget at or above the bound, yet some configuration failed.
    Fail {
        bound: usize,
        configs_checked: u128,
        exhaustive: bool,
        failures: u128,
        first_failure: InputConfig,
        report: OutcomeReport,
    },
    /// Budget below the bound; the witness shows why.
    Refuted {
        bound: Option<usize>,
        witness: Witness,
    },
}

impl CertifyOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CertifyOutcome::Pass { .. })
    }
}

/// Checks `alg` at `budget`: a sweep over configurations when the budget
/// reaches the bound, a refutation otherwise.
pub fn certify(
    spec: &DynamicGraphSpec,
    k: usize,
    alg: &dyn Algorithm,
    budget: usize,
    opts: CertifyOptions,
) -> Result<CertifyOutcome> {
    let bound = match dyngraph::min_rounds(spec, k, opts.max_rounds) {
        Ok(r) => Some(r),
        Err(Error::NotDominatedWithinCap { .. }) => None,
        Err(e) => return Err(e),
    };
    match bound {
        Some(r) if budget >= r => sweep(spec, k, alg, budget, r, opts),
        _ => Ok(CertifyOutcome::Refuted {
            bound,
            witness: refute(spec, k, alg, budget)?,
        }),
    }
}

fn sweep(
    spec: &DynamicGraphSpec,
    k: usize,
    alg: &dyn Algorithm,
    budget: usize,
    bound: usize,
    opts: CertifyOptions,
) -> Result<CertifyOutcome> {
    let n = spec.n();
    let total = (k as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    let exhaustive = total <= opts.exhaustive_cap;
    let configs: Vec<InputConfig> = if exhaustive {
        InputConfig::all(n, k).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.samples)
            .map(|_| {
                (0..n)
                    .map(|_| rng.random_range(0..=k as Value))
                    .collect::<Vec<_>>()
                    .into()
            })
            .collect()
    };

    let sim = Simulator::new(spec, k, budget);
    let reports = configs
        .par_iter()
        .map(|c| sim.run(alg, c))
        .collect::<Result<Vec<_>>>()?;
    let failures = reports.iter().filter(|r| !r.solved()).count() as u128;
    let configs_checked = configs.len() as u128;
    Ok(match reports.iter().position(|r| !r.solved()) {
        None => CertifyOutcome::Pass {
            bound,
            configs_checked,
            exhaustive,
        },
        Some(i) => CertifyOutcome::Fail {
            bound,
            configs_checked,
            exhaustive,
            failures,
            first_failure: configs[i].clone(),
            report: reports[i].clone(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{ConstantZero, FloodDominator, MinHeard};

    fn c5() -> DynamicGraphSpec {
        DynamicGraphSpec::directed_cycle(5).unwrap()
    }

    #[test]
    fn refutes_truncated_flooding_on_c5() {
        let spec = c5();
        let w = refute(&spec, 2, &FloodDominator::with_rounds(2), 1).unwrap();
        assert_eq!(w.kind, WitnessKind::AgreementViolation);
        assert!(w.verified);
        assert_eq!(w.nodes.len(), 3);
        assert_eq!(w.outputs.iter().collect::<BTreeSet<_>>().len(), 3);
        let replay = protocol::run(&spec, 2, &FloodDominator::with_rounds(2), &w.config, 1).unwrap();
        assert!(!replay.agreeing);
        for (node, out) in w.nodes.iter().zip(&w.outputs) {
            assert_eq!(replay.outputs[node - 1], *out);
        }
    }

    #[test]
    fn refutes_min_heard_on_c5() {
        let w = refute(&c5(), 2, &MinHeard, 1).unwrap();
        assert_eq!(w.kind, WitnessKind::AgreementViolation);
        assert!(w.verified);
    }

    #[test]
    fn constant_zero_breaks_validity_at_the_all_ones_corner() {
        for (spec, k, budget) in [
            (c5(), 2, 1),
            (c5(), 1, 3),
            (DynamicGraphSpec::complete(4).unwrap(), 3, 0),
        ] {
            let w = refute(&spec, k, &ConstantZero, budget).unwrap();
            assert_eq!(w.kind, WitnessKind::ValidityViolation);
            assert_eq!(w.config, InputConfig::uniform(spec.n(), 1));
            assert_eq!(w.outputs, vec![0]);
            assert!(w.simplex.is_none());
            assert!(w.verified);
        }
    }

    #[test]
    fn refuse_at_or_above_bound() {
        assert!(matches!(
            refute(&c5(), 2, &MinHeard, 2),
            Err(Error::BudgetNotBelowBound { budget: 2, .. })
        ));
        // n <= k: zero rounds already suffice
        let k2 = DynamicGraphSpec::complete(2).unwrap();
        assert!(matches!(
            refute(&k2, 2, &MinHeard, 0),
            Err(Error::BudgetNotBelowBound { budget: 0, gamma: 2, k: 2 })
        ));
    }

    #[test]
    fn witness_json_layout() {
        let w = refute(&c5(), 2, &FloodDominator::with_rounds(2), 1).unwrap();
        let json: serde_json::Value = serde_json::to_value(&w).unwrap();
        let keys: BTreeSet<_> = json.as_object().unwrap().keys().cloned().collect();
        assert_eq!(
            keys,
            ["budget", "config", "kind", "nodes", "outputs", "simplex", "verified"]
                .map(String::from)
                .into()
        );
        assert_eq!(json["kind"], "agreement_violation");
        assert!(json["config"].is_string());
        assert!(json["simplex"]["base"].is_array());
        assert!(json["simplex"]["perm"].is_array());
        let back: Witness = serde_json::from_value(json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn certify_examples() {
        let spec = c5();
        let flood = FloodDominator::with_rounds(2);
        match certify(&spec, 2, &flood, 2, CertifyOptions::default()).unwrap() {
            CertifyOutcome::Pass {
                bound,
                configs_checked,
                exhaustive,
            } => assert_eq!((bound, configs_checked, exhaustive), (2, 243, true)),
            other => panic!("expected pass, got {other:?}"),
        }

        let k4 = DynamicGraphSpec::complete(4).unwrap();
        let out = certify(&k4, 1, &FloodDominator::auto(), 1, CertifyOptions::default()).unwrap();
        assert_eq!(
            out,
            CertifyOutcome::Pass {
                bound: 1,
                configs_checked: 16,
                exhaustive: true
            }
        );

        match certify(&spec, 2, &flood, 1, CertifyOptions::default()).unwrap() {
            CertifyOutcome::Refuted { bound, witness } => {
                assert_eq!(bound, Some(2));
                assert!(witness.verified);
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn certify_reports_failures_above_the_bound() {
        let out = certify(&c5(), 2, &ConstantZero, 2, CertifyOptions::default()).unwrap();
        match out {
            CertifyOutcome::Fail {
                first_failure,
                report,
                ..
            } => {
                assert_eq!(first_failure.to_string(), "11111");
                assert!(!report.valid);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn certify_samples_large_instances() {
        let spec = DynamicGraphSpec::complete(14).unwrap();
        let opts = CertifyOptions {
            samples: 200,
            seed: 7,
            ..CertifyOptions::default()
        };
        let out = certify(&spec, 2, &FloodDominator::auto(), 1, opts).unwrap();
        assert_eq!(
            out,
            CertifyOutcome::Pass {
                bound: 1,
                configs_checked: 200,
                exhaustive: false
            }
        );
    }
}
