//! Kuhn triangulation of `{n >= x_1 >= ... >= x_k >= 0}` and the Sperner
//! coloring induced by a candidate algorithm.
//!
//! Each lattice vertex `x` carries an input configuration `inp(x)` and a node
//! `node(x)` that cannot hear from any of the nodes `x_1, ..., x_k`. Coloring
//! `x` by the decision of `node(x)` on `inp(x)` yields a Sperner coloring for
//! any validity-respecting algorithm, whose panchromatic simplex is a set of
//! `k + 1` nodes deciding `k + 1` different values on one configuration.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::dyngraph::{min_dominating_set, Digraph, DynamicGraphSpec};
use crate::error::{Error, Result};
use crate::protocol::{Algorithm, InputConfig, Simulator, Value};

/// Point of `Z^k` with `n >= x_1 >= ... >= x_k >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVertex {
    pub coords: Vec<usize>,
}

impl LatticeVertex {
    pub fn new(coords: Vec<usize>) -> Self {
        Self { coords }
    }

    /// Corner `v_i`: the first `i` coordinates are `n`, the rest 0.
    pub fn corner(n: usize, k: usize, i: usize) -> Self {
        Self::new((0..k).map(|j| if j < i { n } else { 0 }).collect())
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }

    pub fn is_valid(&self, n: usize) -> bool {
        self.coords.first().is_none_or(|&x| x <= n)
            && self.coords.windows(2).all(|w| w[0] >= w[1])
    }

    /// Shift by `+e_axis` (axis is 1-based).
    pub fn step(&self, axis: usize) -> Self {
        let mut coords = self.coords.clone();
        coords[axis - 1] += 1;
        Self { coords }
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords.iter().join(","))
    }
}

/// Every vertex of the triangulation in lexicographic order;
/// `binomial(n + k, k)` of them.
pub fn vertices(n: usize, k: usize) -> impl Iterator<Item = LatticeVertex> {
    let mut next = Some(vec![0usize; k]);
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        // odometer: bump the last coordinate still below its cap
        for i in (0..k).rev() {
            let cap = if i == 0 { n } else { succ[i - 1] };
            if succ[i] < cap {
                succ[i] += 1;
                succ[i + 1..].fill(0);
                next = Some(succ);
                break;
            }
        }
        Some(LatticeVertex::new(current))
    })
}

/// Base point `y_0` and an ordering `pi` of the axes;
/// `y_i = y_{i-1} + e_{pi(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimitiveSimplex {
    pub base: LatticeVertex,
    /// Permutation of `1..=k`.
    pub perm: Vec<usize>,
}

impl PrimitiveSimplex {
    pub fn new(base: LatticeVertex, perm: Vec<usize>) -> Self {
        Self { base, perm }
    }

    /// `y_0, ..., y_k`.
    pub fn vertices(&self) -> Vec<LatticeVertex> {
        let mut out = Vec::with_capacity(self.perm.len() + 1);
        out.push(self.base.clone());
        for &axis in &self.perm {
            let last = out.last().expect("non-empty");
            out.push(last.step(axis));
        }
        out
    }

    /// Whether all `k + 1` vertices lie in the triangulated simplex.
    pub fn is_inside(&self, n: usize) -> bool {
        self.vertices().iter().all(|v| v.is_valid(n))
    }
}

impl fmt::Display for PrimitiveSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+[{}]", self.base, self.perm.iter().join(","))
    }
}

/// Primitive simplices fully inside the triangulated simplex, ordered by
/// `(base, perm)`; `n^k` of them.
pub fn primitive_simplices(n: usize, k: usize) -> impl Iterator<Item = PrimitiveSimplex> {
    vertices(n, k).flat_map(move |base| {
        (1..=k)
            .permutations(k)
            .map(move |perm| PrimitiveSimplex::new(base.clone(), perm))
            .filter(move |s| s.is_inside(n))
    })
}

/// Input configuration of vertex `v`: nodes `1..=x_k` get `k`, nodes
/// `x_{j+1}+1..=x_j` get `j`, nodes `x_1+1..=n` get 0.
pub fn inp(v: &LatticeVertex, n: usize) -> InputConfig {
    let k = v.k();
    let x = &v.coords;
    let mut values = vec![0 as Value; n];
    if k == 0 {
        return values.into();
    }
    values[..x[k - 1]].fill(k as Value);
    for j in (1..k).rev() {
        values[x[j]..x[j - 1]].fill(j as Value);
    }
    values.into()
}

/// Indices `j` whose barycentric weight at a vertex is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Carrier {
    pub indices: BTreeSet<Value>,
}

impl Carrier {
    pub fn contains(&self, color: Value) -> bool {
        self.indices.contains(&color)
    }
}

/// Carrier from barycentric weights: `n*lambda_0 = n - x_1`,
/// `n*lambda_j = x_j - x_{j+1}`, `n*lambda_k = x_k`.
pub fn carrier(v: &LatticeVertex, n: usize) -> Carrier {
    let x = &v.coords;
    let k = x.len();
    let weight = |j: usize| -> usize {
        match j {
            0 => n - x.first().copied().unwrap_or(0),
            j if j == k => x[k - 1],
            j => x[j - 1] - x[j],
        }
    };
    let indices: BTreeSet<Value> = (0..=k).filter(|&j| weight(j) > 0).map(|j| j as Value).collect();
    debug_assert_eq!(indices, inp(v, n).distinct_values());
    Carrier { indices }
}

/// Picks `node(x)` for a fixed graph and budget.
pub struct NodeAssigner {
    closure: Digraph,
    k: usize,
}

impl NodeAssigner {
    /// Requires `gamma(H_budget) > k`, i.e. `budget` below the bound.
    pub fn new(spec: &DynamicGraphSpec, k: usize, budget: usize) -> Result<Self> {
        let closure = crate::dyngraph::closure(spec, budget);
        let gamma = min_dominating_set(&closure)?.size;
        if gamma <= k {
            return Err(Error::BudgetNotBelowBound { budget, gamma, k });
        }
        Ok(Self { closure, k })
    }

    /// Smallest node outside `P = {x_1, ..., x_k} \ {0}` with no arc from `P`
    /// in `H_budget`.
    pub fn assign(&self, v: &LatticeVertex) -> Result<usize> {
        debug_assert_eq!(v.k(), self.k);
        let blockers: BTreeSet<usize> = v.coords.iter().copied().filter(|&x| x > 0).collect();
        (1..=self.closure.n())
            .find(|&w| !blockers.iter().any(|&p| p == w || self.closure.has_arc(p, w)))
            .ok_or_else(|| Error::AssignmentImpossible {
                vertex: v.coords.clone(),
                blockers: blockers.into_iter().collect(),
            })
    }
}

pub fn assign_node(spec: &DynamicGraphSpec, k: usize, budget: usize, v: &LatticeVertex) -> Result<usize> {
    NodeAssigner::new(spec, k, budget)?.assign(v)
}

/// The coloring `x -> ALG(node(x), inp(x))` at a fixed budget.
pub struct DecisionColoring<'a> {
    n: usize,
    assigner: NodeAssigner,
    simulator: Simulator<'a>,
    alg: &'a dyn Algorithm,
}

impl<'a> DecisionColoring<'a> {
    pub fn new(spec: &'a DynamicGraphSpec, k: usize, budget: usize, alg: &'a dyn Algorithm) -> Result<Self> {
        Ok(Self {
            n: spec.n(),
            assigner: NodeAssigner::new(spec, k, budget)?,
            simulator: Simulator::new(spec, k, budget),
            alg,
        })
    }

    pub fn node(&self, v: &LatticeVertex) -> Result<usize> {
        self.assigner.assign(v)
    }

    pub fn color(&self, v: &LatticeVertex) -> Result<Value> {
        let node = self.assigner.assign(v)?;
        self.simulator.decide_at(self.alg, &inp(v, self.n), node)
    }
}

pub fn color(
    spec: &DynamicGraphSpec,
    k: usize,
    budget: usize,
    alg: &dyn Algorithm,
    v: &LatticeVertex,
) -> Result<Value> {
    DecisionColoring::new(spec, k, budget, alg)?.color(v)
}

/// A vertex whose color lies outside its carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerViolation {
    pub vertex: LatticeVertex,
    pub color: Value,
    pub carrier: Carrier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerReport {
    pub is_sperner: bool,
    /// In vertex order.
    pub violations: Vec<SpernerViolation>,
}

pub fn check_sperner<F>(n: usize, k: usize, coloring: F) -> SpernerReport
where
    F: Fn(&LatticeVertex) -> Value,
{
    let violations: Vec<SpernerViolation> = vertices(n, k)
        .filter_map(|vertex| {
            let color = coloring(&vertex);
            let carrier = carrier(&vertex, n);
            (!carrier.contains(color)).then_some(SpernerViolation {
                vertex,
                color,
                carrier,
            })
        })
        .collect();
    SpernerReport {
        is_sperner: violations.is_empty(),
        violations,
    }
}

/// First primitive simplex, in enumeration order, whose vertices carry all of
/// `0..=k`.
pub fn find_panchromatic<F>(n: usize, k: usize, coloring: F) -> Result<PrimitiveSimplex>
where
    F: Fn(&LatticeVertex) -> Value,
{
    primitive_simplices(n, k)
        .find(|s| is_panchromatic(s, k, &coloring))
        .ok_or(Error::NoPanchromaticCell)
}

pub(crate) fn is_panchromatic<F>(s: &PrimitiveSimplex, k: usize, coloring: &F) -> bool
where
    F: Fn(&LatticeVertex) -> Value,
{
    let mut seen = vec![false; k + 1];
    for v in s.vertices() {
        match seen.get_mut(coloring(&v) as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return false,
        }
    }
    true
}
