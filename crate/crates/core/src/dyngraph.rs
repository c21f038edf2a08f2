//! Dynamic graph sequences, information-flow closures and domination.
//!
//! Nodes are labeled `1..=n` everywhere in the public API. Internally rows are
//! stored 0-based in bitsets.

use std::fmt::Write as _;
use std::path::Path;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` handled by the exact dominating-set search unless overridden.
pub const DEFAULT_EXACT_CAP: usize = 32;
/// Hard ceiling for the exact search, which works on 64-bit masks.
const EXACT_CAP_LIMIT: usize = 64;
/// Default round cap for [`min_rounds`].
pub const DEFAULT_MAX_ROUNDS: usize = 64;

/// A directed graph on `[n]`. Self-arcs are allowed here; they appear in every closure.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    n: usize,
    out: Vec<FixedBitSet>,
}

impl Digraph {
    /// Graph on `[n]` with no arcs.
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            out: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    /// The identity relation: one self-arc per node.
    pub fn identity(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            g.out[u].insert(u);
        }
        g
    }

    /// Every ordered pair, self-arcs included.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for row in &mut g.out {
            row.insert_range(..);
        }
        g
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in arcs {
            g.add_arc(u, v)?;
        }
        Ok(g)
    }

    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<()> {
        if u == 0 || v == 0 || u > self.n || v > self.n {
            return Err(Error::InvalidGraph(format!(
                "arc ({u},{v}) has an endpoint outside 1..={}",
                self.n
            )));
        }
        self.out[u - 1].insert(v - 1);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        (1..=self.n).contains(&u) && (1..=self.n).contains(&v) && self.out[u - 1].contains(v - 1)
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().map(move |v| (u + 1, v + 1)))
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|row| row.count_ones(..)).sum()
    }

    pub fn out_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[u - 1].ones().map(|v| v + 1)
    }

    /// Nodes `j` with an arc `(j, v)`, ascending.
    pub fn in_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| self.out[j].contains(v - 1))
            .map(|j| j + 1)
            .collect()
    }

    pub fn has_all_self_arcs(&self) -> bool {
        (0..self.n).all(|u| self.out[u].contains(u))
    }

    /// True iff every node is in `set` or has an in-arc from a member.
    pub fn is_dominating(&self, set: &[usize]) -> bool {
        let mut covered = FixedBitSet::with_capacity(self.n);
        for &u in set {
            covered.insert(u - 1);
            covered.union_with(&self.out[u - 1]);
        }
        covered.is_full()
    }

    /// DOT rendering, one `u -> v;` line per arc.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for u in 1..=self.n {
            let _ = writeln!(s, "  {u};");
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(s, "  {u} -> {v};");
        }
        s.push_str("}\n");
        s
    }

    /// One more round of propagation: `u` reaches whatever its current reach
    /// can forward along `step`, and keeps what it already had.
    fn then(&self, step: &Digraph) -> Digraph {
        let mut next = self.clone();
        for (u, row) in self.out.iter().enumerate() {
            for w in row.ones() {
                next.out[u].union_with(&step.out[w]);
            }
        }
        next
    }
}

/// Rule generating `G_t` past the explicitly listed rounds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Extension {
    #[default]
    RepeatLast,
    Cycle,
}

/// Finite description of an infinite sequence `G_1, G_2, ...` on `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct DynamicGraphSpec {
    n: usize,
    rounds: Vec<Digraph>,
    extension: Extension,
}

/// On-disk JSON layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    n: usize,
    rounds: Vec<Vec<[usize; 2]>>,
    #[serde(default)]
    extension: Extension,
}

impl TryFrom<GraphFile> for DynamicGraphSpec {
    type Error = Error;

    fn try_from(file: GraphFile) -> Result<Self> {
        let rounds = file
            .rounds
            .into_iter()
            .map(|arcs| arcs.into_iter().map(|[u, v]| (u, v)).collect())
            .collect();
        DynamicGraphSpec::new(file.n, rounds, file.extension)
    }
}

impl From<DynamicGraphSpec> for GraphFile {
    fn from(spec: DynamicGraphSpec) -> Self {
        GraphFile {
            n: spec.n,
            rounds: spec
                .rounds
                .iter()
                .map(|g| g.arcs().map(|(u, v)| [u, v]).collect())
                .collect(),
            extension: spec.extension,
        }
    }
}

impl DynamicGraphSpec {
    pub fn new(n: usize, rounds: Vec<Vec<(usize, usize)>>, extension: Extension) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGraph(format!("need at least 2 nodes, got {n}")));
        }
        if rounds.is_empty() {
            return Err(Error::InvalidGraph("at least one round is required".into()));
        }
        let rounds = rounds
            .into_iter()
            .enumerate()
            .map(|(t, arcs)| {
                if let Some(&(u, _)) = arcs.iter().find(|(u, v)| u == v) {
                    return Err(Error::InvalidGraph(format!(
                        "round {} has a self-loop at node {u}",
                        t + 1
                    )));
                }
                Digraph::from_arcs(n, arcs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            rounds,
            extension,
        })
    }

    /// The same graph in every round.
    pub fn constant(n: usize, arcs: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(n, vec![arcs], Extension::RepeatLast)
    }

    /// The directed cycle `1 -> 2 -> ... -> n -> 1`, every round.
    pub fn directed_cycle(n: usize) -> Result<Self> {
        Self::constant(n, (1..=n).map(|i| (i, i % n + 1)).collect())
    }

    /// The directed path `1 -> 2 -> ... -> n`, every round.
    pub fn directed_path(n: usize) -> Result<Self> {
        Self::constant(n, (1..n).map(|i| (i, i + 1)).collect())
    }

    /// Complete digraph without self-loops, every round.
    pub fn complete(n: usize) -> Result<Self> {
        let arcs = (1..=n)
            .flat_map(|u| (1..=n).filter(move |&v| v != u).map(move |v| (u, v)))
            .collect();
        Self::constant(n, arcs)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph spec serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rounds(&self) -> &[Digraph] {
        &self.rounds
    }

    pub fn extension(&self) -> Extension {
        self.extension
    }

    /// `G_t` for `t >= 1`.
    pub fn graph_at(&self, t: usize) -> &Digraph {
        assert!(t >= 1, "rounds are numbered from 1");
        let m = self.rounds.len();
        let idx = match self.extension {
            _ if t <= m => t - 1,
            Extension::RepeatLast => m - 1,
            Extension::Cycle => (t - 1) % m,
        };
        &self.rounds[idx]
    }

    /// Iterator over `H_0, H_1, H_2, ...` computed incrementally.
    pub fn closures(&self) -> Closures<'_> {
        Closures {
            spec: self,
            next_round: 0,
            current: None,
        }
    }
}

/// Incremental closure sequence; see [`DynamicGraphSpec::closures`].
pub struct Closures<'a> {
    spec: &'a DynamicGraphSpec,
    next_round: usize,
    current: Option<Digraph>,
}

impl Iterator for Closures<'_> {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        let next = match self.current.take() {
            None => Digraph::identity(self.spec.n),
            Some(h) => h.then(self.spec.graph_at(self.next_round)),
        };
        self.next_round += 1;
        self.current = Some(next.clone());
        Some(next)
    }
}

pub fn graph_at(spec: &DynamicGraphSpec, t: usize) -> &Digraph {
    spec.graph_at(t)
}

/// `H_r`: arc `(u, v)` iff information leaving `u` before round 1 can be at
/// `v` after round `r`, moving along `G_t` or staying put at each round.
pub fn closure(spec: &DynamicGraphSpec, r: usize) -> Digraph {
    spec.closures().nth(r).expect("closure sequence is infinite")
}

/// A dominating set under closure semantics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatingSetResult {
    pub size: usize,
    pub members: Vec<usize>,
    /// Whether `size` is proven minimum.
    pub exact: bool,
}

/// Minimum dominating set with the default exact-search cap.
pub fn min_dominating_set(h: &Digraph) -> Result<DominatingSetResult> {
    min_dominating_set_with_cap(h, DEFAULT_EXACT_CAP)
}

/// Minimum dominating set by branch and bound.
///
/// Sizes are tried upward from a coverage lower bound to the greedy size. At
/// each size, candidate sets are explored as increasing id lists in
/// lexicographic order, so the first hit is the lexicographically smallest
/// optimum. A node may dominate only itself and its out-neighbors.
pub fn min_dominating_set_with_cap(h: &Digraph, cap: usize) -> Result<DominatingSetResult> {
    let cap = cap.min(EXACT_CAP_LIMIT);
    let n = h.n;
    if n > cap {
        return Err(Error::CapExceeded {
            what: "exact dominating-set search on n",
            size: n as u128,
            cap: cap as u128,
        });
    }
    if n == 0 {
        return Ok(DominatingSetResult {
            size: 0,
            members: vec![],
            exact: true,
        });
    }

    let cover: Vec<u64> = (0..n)
        .map(|u| h.out[u].ones().fold(1u64 << u, |m, v| m | (1u64 << v)))
        .collect();
    let mut dominators = vec![0u64; n];
    for (u, &c) in cover.iter().enumerate() {
        for (w, d) in dominators.iter_mut().enumerate() {
            if c >> w & 1 == 1 {
                *d |= 1u64 << u;
            }
        }
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    let upper = greedy_dominating_set(h).size;
    let widest = cover.iter().map(|c| c.count_ones() as usize).max().unwrap_or(1);
    let lower = n.div_ceil(widest);

    let search = BranchAndBound {
        n,
        cover: &cover,
        dominators: &dominators,
        full,
    };
    for size in lower..=upper {
        let mut chosen = Vec::with_capacity(size);
        if search.descend(size, 0, 0, &mut chosen) {
            let members: Vec<usize> = chosen.iter().map(|&u| u + 1).collect();
            return Ok(DominatingSetResult {
                size: members.len(),
                members,
                exact: true,
            });
        }
    }
    unreachable!("greedy produced a dominating set of size {upper}")
}

struct BranchAndBound<'a> {
    n: usize,
    cover: &'a [u64],
    dominators: &'a [u64],
    full: u64,
}

impl BranchAndBound<'_> {
    fn descend(&self, size: usize, start: usize, covered: u64, chosen: &mut Vec<usize>) -> bool {
        if covered == self.full {
            return true;
        }
        let remaining = size - chosen.len();
        if remaining == 0 || start >= self.n {
            return false;
        }
        let uncovered = self.full & !covered;
        let candidates = self.full & !((1u64 << start) - 1);

        // every uncovered node still needs a dominator among the candidates
        let mut rest = uncovered;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            if self.dominators[w] & candidates == 0 {
                return false;
            }
            rest &= rest - 1;
        }

        let mut gains: Vec<u32> = (start..self.n)
            .map(|c| (self.cover[c] & uncovered).count_ones())
            .collect();
        gains.sort_unstable_by(|a, b| b.cmp(a));
        let best: u32 = gains.iter().take(remaining).sum();
        if best < uncovered.count_ones() {
            return false;
        }

        for c in start..self.n {
            // a member adding nothing new could be dropped, contradicting minimality
            if self.cover[c] & uncovered == 0 {
                continue;
            }
            chosen.push(c);
            if self.descend(size, c + 1, covered | self.cover[c], chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

/// Greedy max-coverage dominating set; ties go to the smallest id.
pub fn greedy_dominating_set(h: &Digraph) -> DominatingSetResult {
    let n = h.n;
    let cover: Vec<FixedBitSet> = (0..n)
        .map(|u| {
            let mut c = h.out[u].clone();
            c.insert(u);
            c
        })
        .collect();
    let mut covered = FixedBitSet::with_capacity(n);
    let mut members = Vec::new();
    while !covered.is_full() {
        let (best, _) = cover
            .iter()
            .enumerate()
            .map(|(u, c)| (u, c.difference_count(&covered)))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        covered.union_with(&cover[best]);
        members.push(best + 1);
    }
    members.sort_unstable();
    DominatingSetResult {
        size: members.len(),
        members,
        exact: false,
    }
}

/// The tight bound together with the data backing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bound {
    /// Smallest `r >= 1` with `gamma(H_r) <= k`.
    pub rounds: usize,
    /// Minimum dominating set of `H_r`.
    pub dominating_set: Vec<usize>,
    /// `gamma(H_1), ..., gamma(H_r)`.
    pub gamma_by_round: Vec<usize>,
}

pub fn bound(spec: &DynamicGraphSpec, k: usize, max_rounds: usize) -> Result<Bound> {
    assert!(k >= 1, "k must be positive");
    let mut gamma_by_round = Vec::new();
    for (r, h) in spec.closures().enumerate().skip(1).take(max_rounds) {
        let d = min_dominating_set(&h)?;
        gamma_by_round.push(d.size);
        if d.size <= k {
            return Ok(Bound {
                rounds: r,
                dominating_set: d.members,
                gamma_by_round,
            });
        }
    }
    Err(Error::NotDominatedWithinCap { k, max_rounds })
}

/// Smallest `r` in `1..=max_rounds` with `gamma(H_r) <= k`.
pub fn min_rounds(spec: &DynamicGraphSpec, k: usize, max_rounds: usize) -> Result<usize> {
    bound(spec, k, max_rounds).map(|b| b.rounds)
}
