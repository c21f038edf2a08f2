//! Full-information executions in the KNOW-ALL model.
//!
//! The graph sequence is common knowledge, so after `budget` rounds of
//! flooding a node knows exactly the inputs of its in-neighbors in
//! `H_budget`. A [`View`] stores that restriction and nothing else.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dyngraph::{
    self, closure, greedy_dominating_set, min_dominating_set, Digraph, DynamicGraphSpec,
    DEFAULT_MAX_ROUNDS,
};
use crate::error::{Error, Result};

/// An input or output value in `0..=k`.
pub type Value = u8;

/// One input per node, node 1 first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputConfig {
    values: Vec<Value>,
}

impl InputConfig {
    /// Checks every entry against `k`.
    pub fn new(values: Vec<Value>, k: usize) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v as usize > k) {
            return Err(Error::InvalidInput(format!(
                "node {} has input {v}, outside 0..={k}",
                i + 1
            )));
        }
        Ok(Self { values })
    }

    /// Parses the digit-string form (`"21100"`), rejecting digits above `k`.
    pub fn parse(s: &str, k: usize) -> Result<Self> {
        let config: InputConfig = s.parse()?;
        Self::new(config.values, k)
    }

    /// Like [`parse`](Self::parse) and also checks the length against `spec`.
    pub fn parse_for(spec: &DynamicGraphSpec, s: &str, k: usize) -> Result<Self> {
        let config = Self::parse(s, k)?;
        config.check_against(spec, k)?;
        Ok(config)
    }

    pub fn uniform(n: usize, value: Value) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    /// Input of node `node` (1-based).
    pub fn get(&self, node: usize) -> Value {
        self.values[node - 1]
    }

    pub fn distinct_values(&self) -> BTreeSet<Value> {
        self.values.iter().copied().collect()
    }

    /// Nodes (1-based) whose inputs differ between `self` and `other`.
    pub fn differing_nodes(&self, other: &InputConfig) -> BTreeSet<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// All `(k+1)^n` configurations in lexicographic order.
    pub fn all(n: usize, k: usize) -> impl Iterator<Item = InputConfig> {
        let mut next = Some(vec![0 as Value; n]);
        std::iter::from_fn(move || {
            let current = next.take()?;
            let mut succ = current.clone();
            for i in (0..n).rev() {
                if (succ[i] as usize) < k {
                    succ[i] += 1;
                    next = Some(succ);
                    break;
                }
                succ[i] = 0;
            }
            Some(InputConfig { values: current })
        })
    }

    pub(crate) fn check_against(&self, spec: &DynamicGraphSpec, k: usize) -> Result<()> {
        if self.len() != spec.n() {
            return Err(Error::InvalidInput(format!(
                "configuration has {} entries, graph has {} nodes",
                self.len(),
                spec.n()
            )));
        }
        Self::new(self.values.clone(), k).map(|_| ())
    }
}

impl From<Vec<Value>> for InputConfig {
    fn from(values: Vec<Value>) -> Self {
        Self { values }
    }
}

impl fmt::Display for InputConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.iter().all(|&v| v < 10) {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for InputConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let values = if s.contains(',') {
            s.split(',')
                .map(|p| p.trim().parse::<Value>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::InvalidInput(format!("{s:?}: {e}")))?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Value)
                        .ok_or_else(|| Error::InvalidInput(format!("{s:?}: {c:?} is not a digit")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        if values.is_empty() {
            return Err(Error::InvalidInput("empty configuration".into()));
        }
        Ok(Self { values })
    }
}

impl Serialize for InputConfig {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for InputConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Everything `observer` knows after `budget` rounds.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct View {
    pub observer: usize,
    pub budget: usize,
    /// Inputs of the in-neighbors of `observer` in `H_budget`, itself included.
    pub heard: BTreeMap<usize, Value>,
}

impl View {
    /// View read off a precomputed closure `h = H_budget`.
    pub fn from_closure(h: &Digraph, inputs: &InputConfig, observer: usize, budget: usize) -> Self {
        let heard = h
            .in_neighbors(observer)
            .into_iter()
            .map(|j| (j, inputs.get(j)))
            .collect();
        View {
            observer,
            budget,
            heard,
        }
    }

    pub fn own_input(&self) -> Value {
        self.heard[&self.observer]
    }
}

pub fn view_of(spec: &DynamicGraphSpec, inputs: &InputConfig, observer: usize, budget: usize) -> View {
    View::from_closure(&closure(spec, budget), inputs, observer, budget)
}

/// A deterministic candidate algorithm.
///
/// `decide` must be a pure function of its arguments and return a value in
/// `0..=k`; [`run`] reports anything else as an error.
pub trait Algorithm: Send + Sync {
    fn name(&self) -> String;

    fn decide(&self, spec: &DynamicGraphSpec, k: usize, view: &View) -> Value;

    /// Whether every output is some heard input.
    fn validity_respecting(&self) -> bool {
        false
    }
}

impl<A: Algorithm + ?Sized> Algorithm for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn decide(&self, spec: &DynamicGraphSpec, k: usize, view: &View) -> Value {
        (**self).decide(spec, k, view)
    }

    fn validity_respecting(&self) -> bool {
        (**self).validity_respecting()
    }
}

/// Outputs of one execution checked against validity and agreement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeReport {
    pub outputs: Vec<Value>,
    /// Every output is some node's input.
    pub valid: bool,
    /// At most `k` distinct outputs.
    pub agreeing: bool,
    pub distinct_count: usize,
}

impl OutcomeReport {
    pub fn evaluate(inputs: &InputConfig, outputs: Vec<Value>, k: usize) -> Self {
        let present = inputs.distinct_values();
        let distinct: BTreeSet<Value> = outputs.iter().copied().collect();
        OutcomeReport {
            valid: distinct.is_subset(&present),
            agreeing: distinct.len() <= k,
            distinct_count: distinct.len(),
            outputs,
        }
    }

    pub fn solved(&self) -> bool {
        self.valid && self.agreeing
    }
}

/// Runs algorithms at a fixed budget, reusing one closure.
pub struct Simulator<'a> {
    spec: &'a DynamicGraphSpec,
    k: usize,
    budget: usize,
    closure: Digraph,
}

impl<'a> Simulator<'a> {
    pub fn new(spec: &'a DynamicGraphSpec, k: usize, budget: usize) -> Self {
        Self {
            spec,
            k,
            budget,
            closure: closure(spec, budget),
        }
    }

    pub fn closure(&self) -> &Digraph {
        &self.closure
    }

    pub fn view(&self, inputs: &InputConfig, observer: usize) -> View {
        View::from_closure(&self.closure, inputs, observer, self.budget)
    }

    /// Output of `alg` at a single node.
    pub fn decide_at(&self, alg: &dyn Algorithm, inputs: &InputConfig, node: usize) -> Result<Value> {
        let value = alg.decide(self.spec, self.k, &self.view(inputs, node));
        if value as usize > self.k {
            return Err(Error::AlgorithmRange {
                algorithm: alg.name(),
                node,
                value,
                k: self.k,
            });
        }
        Ok(value)
    }

    pub fn run(&self, alg: &dyn Algorithm, inputs: &InputConfig) -> Result<OutcomeReport> {
        inputs.check_against(self.spec, self.k)?;
        let outputs = (1..=self.spec.n())
            .map(|i| self.decide_at(alg, inputs, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(OutcomeReport::evaluate(inputs, outputs, self.k))
    }
}

/// Applies `alg` at every node after `budget` rounds and checks the outcome.
pub fn run(
    spec: &DynamicGraphSpec,
    k: usize,
    alg: &dyn Algorithm,
    inputs: &InputConfig,
    budget: usize,
) -> Result<OutcomeReport> {
    Simulator::new(spec, k, budget).run(alg, inputs)
}

/// Result of the flooding algorithm at its own bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloodSolution {
    pub rounds: usize,
    pub dominating_set: Vec<usize>,
    pub report: OutcomeReport,
}

/// Runs `flood_dominator` for `r = min_rounds(spec, k)` rounds.
pub fn flood_solve(
    spec: &DynamicGraphSpec,
    k: usize,
    inputs: &InputConfig,
    max_rounds: usize,
) -> Result<FloodSolution> {
    let bound = dyngraph::bound(spec, k, max_rounds)?;
    let alg = FloodDominator::with_rounds(bound.rounds);
    let report = run(spec, k, &alg, inputs, bound.rounds)?;
    Ok(FloodSolution {
        rounds: bound.rounds,
        dominating_set: bound.dominating_set,
        report,
    })
}

/// Dominator sets per graph, keyed by `k`.
type DominatorCache = HashMap<DynamicGraphSpec, HashMap<usize, Arc<Vec<usize>>>>;

/// Each node outputs the input of the smallest dominator of `H_r` it has heard.
///
/// The dominator set is the minimum dominating set of `H_r` for the intended
/// `r` (by default `min_rounds(spec, k)`). Run below its intended budget a
/// node may hear no dominator; it then outputs its own input.
pub struct FloodDominator {
    rounds: Option<usize>,
    dominators: Mutex<DominatorCache>,
}

impl FloodDominator {
    /// Intended rounds resolved per graph as `min_rounds(spec, k)`.
    pub fn auto() -> Self {
        Self {
            rounds: None,
            dominators: Mutex::default(),
        }
    }

    pub fn with_rounds(rounds: usize) -> Self {
        Self {
            rounds: Some(rounds),
            dominators: Mutex::default(),
        }
    }

    pub fn dominators(&self, spec: &DynamicGraphSpec, k: usize) -> Arc<Vec<usize>> {
        let key = if self.rounds.is_some() { 0 } else { k };
        if let Some(d) = self
            .dominators
            .lock()
            .unwrap()
            .get(spec)
            .and_then(|m| m.get(&key))
        {
            return Arc::clone(d);
        }
        let rounds = match self.rounds {
            Some(r) => Some(r),
            None => dyngraph::min_rounds(spec, k, DEFAULT_MAX_ROUNDS).ok(),
        };
        // no bound within the cap: nobody is a dominator
        let members = rounds.map_or_else(Vec::new, |r| {
            let h = closure(spec, r);
            min_dominating_set(&h)
                .unwrap_or_else(|_| greedy_dominating_set(&h))
                .members
        });
        let members = Arc::new(members);
        self.dominators
            .lock()
            .unwrap()
            .entry(spec.clone())
            .or_default()
            .insert(key, Arc::clone(&members));
        members
    }
}

impl Algorithm for FloodDominator {
    fn name(&self) -> String {
        match self.rounds {
            Some(r) => format!("flood_dominator:{r}"),
            None => "flood_dominator".into(),
        }
    }

    fn decide(&self, spec: &DynamicGraphSpec, k: usize, view: &View) -> Value {
        self.dominators(spec, k)
            .iter()
            .find_map(|j| view.heard.get(j).copied())
            .unwrap_or_else(|| view.own_input())
    }

    fn validity_respecting(&self) -> bool {
        true
    }
}

pub struct MinHeard;

impl Algorithm for MinHeard {
    fn name(&self) -> String {
        "min_heard".into()
    }

    fn decide(&self, _: &DynamicGraphSpec, _: usize, view: &View) -> Value {
        *view.heard.values().min().expect("a view always contains its observer")
    }

    fn validity_respecting(&self) -> bool {
        true
    }
}

pub struct MaxHeard;

impl Algorithm for MaxHeard {
    fn name(&self) -> String {
        "max_heard".into()
    }

    fn decide(&self, _: &DynamicGraphSpec, _: usize, view: &View) -> Value {
        *view.heard.values().max().expect("a view always contains its observer")
    }

    fn validity_respecting(&self) -> bool {
        true
    }
}

/// Most frequent heard value; ties go to the smaller value.
pub struct MajorityHeard;

impl Algorithm for MajorityHeard {
    fn name(&self) -> String {
        "majority_heard".into()
    }

    fn decide(&self, _: &DynamicGraphSpec, _: usize, view: &View) -> Value {
        let mut counts: BTreeMap<Value, usize> = BTreeMap::new();
        for &v in view.heard.values() {
            *counts.entry(v).or_default() += 1;
        }
        counts
            .into_iter()
            .fold((0, 0), |best, (v, c)| if c > best.1 { (v, c) } else { best })
            .0
    }

    fn validity_respecting(&self) -> bool {
        true
    }
}

/// Always outputs 0. Breaks validity whenever nobody holds 0.
pub struct ConstantZero;

impl Algorithm for ConstantZero {
    fn name(&self) -> String {
        "constant_0".into()
    }

    fn decide(&self, _: &DynamicGraphSpec, _: usize, _: &View) -> Value {
        0
    }
}

/// Names of the built-in algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// `flood_dominator` or `flood_dominator:R`.
    FloodDominator(Option<usize>),
    MinHeard,
    MaxHeard,
    MajorityHeard,
    ConstantZero,
}

impl Builtin {
    pub fn all() -> Vec<Builtin> {
        vec![
            Builtin::FloodDominator(None),
            Builtin::MinHeard,
            Builtin::MaxHeard,
            Builtin::MajorityHeard,
            Builtin::ConstantZero,
        ]
    }

    pub fn name(&self) -> String {
        self.instantiate().name()
    }

    pub fn validity_respecting(&self) -> bool {
        !matches!(self, Builtin::ConstantZero)
    }

    pub fn instantiate(&self) -> Box<dyn Algorithm> {
        match *self {
            Builtin::FloodDominator(None) => Box::new(FloodDominator::auto()),
            Builtin::FloodDominator(Some(r)) => Box::new(FloodDominator::with_rounds(r)),
            Builtin::MinHeard => Box::new(MinHeard),
            Builtin::MaxHeard => Box::new(MaxHeard),
            Builtin::MajorityHeard => Box::new(MajorityHeard),
            Builtin::ConstantZero => Box::new(ConstantZero),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(name: &str) -> Result<Self> {
        let unknown = || Error::UnknownAlgorithm(name.to_string());
        Ok(match name {
            "flood_dominator" => Builtin::FloodDominator(None),
            "min_heard" => Builtin::MinHeard,
            "max_heard" => Builtin::MaxHeard,
            "majority_heard" => Builtin::MajorityHeard,
            "constant_0" => Builtin::ConstantZero,
            _ => {
                let r = name.strip_prefix("flood_dominator:").ok_or_else(unknown)?;
                Builtin::FloodDominator(Some(r.parse().map_err(|_| unknown())?))
            }
        })
    }
}

/// One instance of every built-in algorithm.
pub fn builtin_algorithms() -> Vec<Box<dyn Algorithm>> {
    Builtin::all().iter().map(Builtin::instantiate).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> DynamicGraphSpec {
        DynamicGraphSpec::directed_cycle(5).unwrap()
    }

    fn cfg(s: &str) -> InputConfig {
        InputConfig::parse(s, 9).unwrap()
    }

    fn heard(pairs: &[(usize, Value)]) -> BTreeMap<usize, Value> {
        pairs.iter().copied().collect()
    }

    fn view(observer: usize, pairs: &[(usize, Value)]) -> View {
        View {
            observer,
            budget: 1,
            heard: heard(pairs),
        }
    }

    #[test]
    fn parse_and_display() {
        let c = InputConfig::parse("21100", 2).unwrap();
        assert_eq!(c.values(), &[2, 1, 1, 0, 0]);
        assert_eq!(c.to_string(), "21100");
        assert!(InputConfig::parse("21300", 2).is_err());
        assert!(InputConfig::parse("2a", 2).is_err());
        assert!(InputConfig::parse("", 2).is_err());
        assert!(InputConfig::parse_for(&c5(), "2110", 2).is_err());
        assert_eq!(InputConfig::parse("1,10,2", 10).unwrap().to_string(), "1,10,2");
    }

    #[test]
    fn all_configurations() {
        let all: Vec<String> = InputConfig::all(2, 2).map(|c| c.to_string()).collect();
        assert_eq!(all, ["00", "01", "02", "10", "11", "12", "20", "21", "22"]);
        assert_eq!(InputConfig::all(5, 2).count(), 243);
    }

    #[test]
    fn views_on_c5() {
        let spec = c5();
        let inputs = cfg("21100");
        assert_eq!(view_of(&spec, &inputs, 3, 0).heard, heard(&[(3, 1)]));
        assert_eq!(view_of(&spec, &inputs, 5, 1).heard, heard(&[(4, 0), (5, 0)]));
        assert_eq!(
            view_of(&spec, &inputs, 1, 2).heard,
            heard(&[(4, 0), (5, 0), (1, 2)])
        );
    }

    #[test]
    fn run_examples() {
        let spec = c5();
        for alg in builtin_algorithms().iter().filter(|a| a.validity_respecting()) {
            let r = run(&spec, 2, alg.as_ref(), &cfg("00000"), 1).unwrap();
            assert_eq!(r.outputs, vec![0; 5]);
            assert!(r.solved());
        }
        let r = run(&spec, 2, &ConstantZero, &cfg("11111"), 1).unwrap();
        assert!(!r.valid);
        assert!(r.agreeing);
    }

    #[test]
    fn run_rejects_out_of_range_outputs() {
        struct Seven;
        impl Algorithm for Seven {
            fn name(&self) -> String {
                "seven".into()
            }
            fn decide(&self, _: &DynamicGraphSpec, _: usize, _: &View) -> Value {
                7
            }
        }
        let err = run(&c5(), 2, &Seven, &cfg("00000"), 1).unwrap_err();
        assert!(matches!(err, Error::AlgorithmRange { node: 1, value: 7, k: 2, .. }));
    }

    #[test]
    fn run_rejects_bad_inputs() {
        assert!(run(&c5(), 2, &MinHeard, &cfg("0000"), 1).is_err());
        assert!(run(&c5(), 1, &MinHeard, &cfg("00002"), 1).is_err());
    }

    #[test]
    fn builtin_decisions() {
        let spec = c5();
        assert_eq!(MinHeard.decide(&spec, 2, &view(5, &[(4, 0), (5, 2)])), 0);
        assert_eq!(MaxHeard.decide(&spec, 2, &view(5, &[(4, 0), (5, 2)])), 2);
        assert_eq!(
            MajorityHeard.decide(&spec, 2, &view(3, &[(1, 2), (2, 1), (3, 1)])),
            1
        );
        assert_eq!(
            MajorityHeard.decide(&spec, 2, &view(3, &[(1, 2), (2, 1)])),
            1
        );
    }

    #[test]
    fn flood_dominator_below_budget() {
        let spec = c5();
        let alg = FloodDominator::with_rounds(2);
        assert_eq!(*alg.dominators(&spec, 2), vec![1, 3]);
        // node 5 hears {4, 5}: no dominator, falls back to its own input
        let v = view_of(&spec, &cfg("21100"), 5, 1);
        assert_eq!(alg.decide(&spec, 2, &v), 0);
        let v = view_of(&spec, &cfg("21121"), 5, 1);
        assert_eq!(alg.decide(&spec, 2, &v), 1);
        // node 4 hears {3, 4}: dominator 3
        let v = view_of(&spec, &cfg("21200"), 4, 1);
        assert_eq!(alg.decide(&spec, 2, &v), 2);
    }

    #[test]
    fn flood_dominator_auto_resolves_per_k() {
        let spec = c5();
        let alg = FloodDominator::auto();
        assert_eq!(*alg.dominators(&spec, 2), vec![1, 3]);
        assert_eq!(*alg.dominators(&spec, 1), vec![1]);
    }

    #[test]
    fn flood_solve_examples() {
        let spec = c5();
        let sol = flood_solve(&spec, 2, &cfg("01201"), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(sol.rounds, 2);
        assert_eq!(sol.dominating_set, vec![1, 3]);
        assert_eq!(sol.report.outputs, vec![0, 0, 0, 2, 2]);
        assert!(sol.report.solved());

        let sol = flood_solve(&spec, 2, &cfg("22222"), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(sol.report.outputs, vec![2; 5]);

        let k4 = DynamicGraphSpec::complete(4).unwrap();
        let sol = flood_solve(&k4, 1, &cfg("1010"), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!((sol.rounds, sol.dominating_set.clone()), (1, vec![1]));
        assert_eq!(sol.report.outputs, vec![1; 4]);

        let sol = flood_solve(&spec, 1, &cfg("10000"), DEFAULT_MAX_ROUNDS).unwrap();
        assert_eq!(sol.rounds, 4);
        assert_eq!(sol.report.outputs, vec![1; 5]);
    }

    #[test]
    fn flood_solve_propagates_cap() {
        let disconnected = DynamicGraphSpec::constant(3, vec![(1, 2)]).unwrap();
        assert!(matches!(
            flood_solve(&disconnected, 1, &cfg("010"), 5),
            Err(Error::NotDominatedWithinCap { .. })
        ));
    }

    #[test]
    fn builtin_names_round_trip() {
        for b in Builtin::all() {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert_eq!(
            "flood_dominator:3".parse::<Builtin>().unwrap(),
            Builtin::FloodDominator(Some(3))
        );
        assert!("flood_dominator:x".parse::<Builtin>().is_err());
        assert!("nope".parse::<Builtin>().is_err());
    }
}
