//! Brute-force reference implementations.
//!
//! These share no search code with the modules they check: domination is by
//! subset enumeration, panchromatic simplices by scanning the full bounding
//! box with a hand-rolled permutation generator. Production paths never call
//! into this module.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dyngraph::{Digraph, DynamicGraphSpec};
use crate::error::{Error, Result};
use crate::kuhn::{LatticeVertex, PrimitiveSimplex};
use crate::protocol::{Algorithm, InputConfig, OutcomeReport, Simulator, Value};

pub const DEFAULT_CONFIG_CAP: u128 = 1_000_000;
pub const DOMINATION_CAP: usize = 20;
pub const DEFAULT_BOX_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub config: InputConfig,
    pub report: OutcomeReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub total_configs: u128,
    pub failures: Vec<Failure>,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn exhaustive_check(
    spec: &DynamicGraphSpec,
    k: usize,
    alg: &dyn Algorithm,
    budget: usize,
) -> Result<ExhaustiveReport> {
    exhaustive_check_with_cap(spec, k, alg, budget, DEFAULT_CONFIG_CAP)
}

/// Runs `alg` on all `(k+1)^n` configurations and lists those not solved.
pub fn exhaustive_check_with_cap(
    spec: &DynamicGraphSpec,
    k: usize,
    alg: &dyn Algorithm,
    budget: usize,
    cap: u128,
) -> Result<ExhaustiveReport> {
    let total = (k as u128 + 1).checked_pow(spec.n() as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::CapExceeded {
            what: "configuration count",
            size: total,
            cap,
        });
    }
    let sim = Simulator::new(spec, k, budget);
    let mut failures = Vec::new();
    for config in InputConfig::all(spec.n(), k) {
        let report = sim.run(alg, &config)?;
        if !report.solved() {
            failures.push(Failure { config, report });
        }
    }
    Ok(ExhaustiveReport {
        total_configs: total,
        failures,
    })
}

/// Domination number by trying every subset, smallest sizes first.
pub fn brute_domination(h: &Digraph) -> Result<usize> {
    let n = h.n();
    if n > DOMINATION_CAP {
        return Err(Error::CapExceeded {
            what: "brute-force domination on n",
            size: n as u128,
            cap: DOMINATION_CAP as u128,
        });
    }
    let dominates = |set: &[usize]| {
        (1..=n).all(|v| set.iter().any(|&u| u == v || h.has_arc(u, v)))
    };
    for size in 0..=n {
        if (1..=n).combinations(size).any(|set| dominates(&set)) {
            return Ok(size);
        }
    }
    unreachable!("the full node set dominates")
}

/// Every panchromatic primitive simplex, in `(base, perm)` order.
pub fn brute_panchromatic<F>(n: usize, k: usize, coloring: F) -> Result<Vec<PrimitiveSimplex>>
where
    F: Fn(&LatticeVertex) -> Value,
{
    let boxed = (n as u128 + 1).checked_pow(k as u32).unwrap_or(u128::MAX);
    if boxed > DEFAULT_BOX_CAP {
        return Err(Error::CapExceeded {
            what: "lattice box size",
            size: boxed,
            cap: DEFAULT_BOX_CAP,
        });
    }
    let perms = permutations(k);
    let monotone = |x: &[usize]| x.iter().all(|&c| c <= n) && x.windows(2).all(|w| w[0] >= w[1]);

    let mut found = Vec::new();
    for base in (0..k).map(|_| 0..=n).multi_cartesian_product() {
        let base = if k == 0 { Vec::new() } else { base };
        for perm in &perms {
            let mut walk = vec![base.clone()];
            for &axis in perm {
                let mut next = walk.last().unwrap().clone();
                next[axis - 1] += 1;
                walk.push(next);
            }
            if !walk.iter().all(|x| monotone(x)) {
                continue;
            }
            let mut colors: Vec<Value> = walk
                .into_iter()
                .map(|x| coloring(&LatticeVertex::new(x)))
                .collect();
            colors.sort_unstable();
            if colors.iter().copied().eq(0..=k as Value) {
                found.push(PrimitiveSimplex::new(LatticeVertex::new(base.clone()), perm.clone()));
            }
        }
    }
    Ok(found)
}

/// Permutations of `1..=k` in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for a in 1..=k {
            if !prefix.contains(&a) {
                prefix.push(a);
                extend(prefix, k, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), k, &mut out);
    out
}
