//! Maximum matching in general graphs: breadth-first alternating search with
//! blossom collapse, one search phase per free start vertex.
//!
//! Every even vertex `v` carries `link`, `bridge` and `first`:
//!
//! * reached through a matched edge: `link` is the previous even vertex,
//!   `bridge` is empty, `first` is `mate(v)`;
//! * turned even by a blossom with bridge edge `(x, y)`, `x` on `v`'s side:
//!   `link = x`, `bridge = y`, `first` = the blossom's nearest common odd
//!   ancestor.
//!
//! `first` references are resolved through a [`UnionTree`], so collapsing a
//! blossom never rewrites pointers of vertices inside it. The start vertex
//! has a virtual odd predecessor, [`BlossomState::sentinel`], which is the
//! common ancestor of blossoms through the root.

mod union_tree;

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

pub use union_tree::UnionTree;

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, SearchSpace};
use crate::quantum::{LedgerSnapshot, OracleConfig, Searcher};
use crate::solution::Matching;

/// Per-phase labels of the alternating search.
#[derive(Debug, Clone)]
pub struct BlossomState {
    root: usize,
    even: Vec<bool>,
    /// Odd vertices actually reached (undiscovered vertices also count as odd).
    discovered: Vec<bool>,
    link: Vec<Option<usize>>,
    bridge: Vec<Option<usize>>,
    first: Vec<usize>,
    queue: VecDeque<usize>,
    tree: UnionTree,
}

impl BlossomState {
    fn new(n: usize, root: usize) -> Self {
        let sentinel = n;
        let mut state = BlossomState {
            root,
            even: vec![false; n],
            discovered: vec![false; n],
            link: vec![None; n],
            bridge: vec![None; n],
            first: vec![sentinel; n],
            queue: VecDeque::from([root]),
            tree: UnionTree::new(n + 1),
        };
        state.even[root] = true;
        state
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Virtual odd predecessor of the root.
    pub fn sentinel(&self) -> usize {
        self.even.len()
    }

    pub fn is_even(&self, v: usize) -> bool {
        self.even[v]
    }

    pub fn is_discovered_odd(&self, v: usize) -> bool {
        self.discovered[v] && !self.even[v]
    }

    pub fn link(&self, v: usize) -> Option<usize> {
        self.link[v]
    }

    pub fn bridge(&self, v: usize) -> Option<usize> {
        self.bridge[v]
    }

    /// Raw `first` pointer (may lead into a collapsed blossom).
    pub fn first_raw(&self, v: usize) -> usize {
        self.first[v]
    }

    /// `first(v)` resolved through the union tree.
    pub fn first(&mut self, v: usize) -> usize {
        self.tree.resolve(self.first[v])
    }

    pub fn queued(&self) -> impl Iterator<Item = usize> + '_ {
        self.queue.iter().copied()
    }

    pub fn even_count(&self) -> usize {
        self.even.iter().filter(|&&e| e).count()
    }
}

/// Alternating path from the even vertex `v` back to the root: `v`, `mate(v)`,
/// ..., root.
pub fn trace_path(state: &BlossomState, matching: &Matching, v: usize) -> Result<Vec<usize>> {
    if !state.even[v] {
        return Err(Error::Contract(format!("trace from non-even vertex {v}")));
    }
    let mut out = Vec::new();
    trace_into(state, matching, v, None, &mut out)?;
    let mut seen = vec![false; state.even.len()];
    for &x in &out {
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::Invariant(format!("trace revisits vertex {x}")));
        }
    }
    Ok(out)
}

// Appends the path from `v` towards the root, stopping after `until` is
// emitted. Returns whether `until` was reached.
fn trace_into(
    state: &BlossomState,
    matching: &Matching,
    v: usize,
    until: Option<usize>,
    out: &mut Vec<usize>,
) -> Result<bool> {
    let limit = state.even.len();
    let start_len = out.len();
    let emit = |x: usize, out: &mut Vec<usize>| -> Result<bool> {
        if out.len() - start_len >= limit {
            return Err(Error::Invariant("cycle detected while tracing path".into()));
        }
        out.push(x);
        Ok(until == Some(x))
    };
    let mut x = v;
    loop {
        if emit(x, out)? {
            return Ok(true);
        }
        if x == state.root {
            return match until {
                None => Ok(false),
                Some(u) => Err(Error::Invariant(format!("reached root before {u}"))),
            };
        }
        match state.bridge[x] {
            None => {
                let mate = matching
                    .mate(x)
                    .ok_or_else(|| Error::Invariant(format!("even vertex {x} has no mate")))?;
                if emit(mate, out)? {
                    return Ok(true);
                }
                x = state.link[x]
                    .ok_or_else(|| Error::Invariant(format!("even vertex {x} has no link")))?;
            }
            Some(other_side) => {
                let own_side = state.link[x]
                    .ok_or_else(|| Error::Invariant(format!("blossom vertex {x} has no link")))?;
                let mut segment = Vec::new();
                trace_into(state, matching, own_side, Some(x), &mut segment)?;
                segment.pop();
                for &y in segment.iter().rev() {
                    if emit(y, out)? {
                        return Ok(true);
                    }
                }
                x = other_side;
            }
        }
    }
}

/// Work of one blossom collapse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CollapseRecord {
    /// Odd vertices collapsed on the first / second side.
    pub p1: usize,
    pub p2: usize,
    /// Ordered-set insertions spent finding the common ancestor.
    pub insertions: usize,
}

/// Per-phase counters.
#[derive(Debug, Clone, Default, Serialize)]
pub struct PhaseCounters {
    /// Odd vertices labeled through matched edges (sum of `e_v`).
    pub labeled: usize,
    /// Bridges that triggered a collapse (sum of `b_v`).
    pub bridges: usize,
    /// Odd vertices turned even by collapses (sum of `r_v`).
    pub collapsed: usize,
    pub insertions: usize,
    pub processed: usize,
    pub collapses: Vec<CollapseRecord>,
}

#[derive(Debug)]
pub enum Step {
    Continue,
    Augment(Vec<usize>),
    Exhausted,
}

/// One alternating search phase from a free start vertex.
pub struct AlternatingSearch<'a> {
    g: &'a BlackBoxGraph,
    matching: &'a Matching,
    searcher: &'a Searcher,
    state: BlossomState,
    counters: PhaseCounters,
}

impl<'a> AlternatingSearch<'a> {
    pub fn new(
        g: &'a BlackBoxGraph,
        matching: &'a Matching,
        start: usize,
        searcher: &'a Searcher,
    ) -> Result<Self> {
        if start >= g.n() {
            return Err(Error::VertexOutOfRange {
                vertex: start,
                n: g.n(),
            });
        }
        if !matching.is_free(start) {
            return Err(Error::Contract(format!("start vertex {start} is matched")));
        }
        Ok(AlternatingSearch {
            g,
            matching,
            searcher,
            state: BlossomState::new(g.n(), start),
            counters: PhaseCounters::default(),
        })
    }

    pub fn state(&self) -> &BlossomState {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut BlossomState {
        &mut self.state
    }

    pub fn counters(&self) -> &PhaseCounters {
        &self.counters
    }

    /// Dequeues one even vertex and runs its three searches.
    pub fn process_next(&mut self) -> Result<Step> {
        let Some(v) = self.state.queue.pop_front() else {
            return Ok(Step::Exhausted);
        };
        self.counters.processed += 1;
        let (g, m, probes) = (self.g, self.matching, self.searcher.probes());
        let d = g.domain_len(v);
        let root = self.state.root;

        // 1: a free neighbor ends an augmenting path
        let free = self.searcher.find_one(d, |i| {
            g.slot(v, i, probes)
                .is_some_and(|w| w != root && m.is_free(w))
        });
        if let Some(w) = free.and_then(|i| g.slot(v, i, probes)) {
            let mut path = vec![w];
            path.extend(trace_path(&self.state, m, v)?);
            return Ok(Step::Augment(path));
        }

        // 2: odd neighbors whose mate is still odd
        let state = &self.state;
        let odd = self.searcher.find_all(d, |i| {
            g.slot(v, i, probes)
                .is_some_and(|w| !state.even[w] && m.mate(w).is_some_and(|x| !state.even[x]))
        });
        for i in odd {
            let Some(w) = g.slot(v, i, probes) else {
                continue;
            };
            let Some(mate) = m.mate(w) else { continue };
            if self.state.even[w] || self.state.even[mate] {
                continue;
            }
            self.state.discovered[w] = true;
            self.state.even[mate] = true;
            self.state.link[mate] = Some(v);
            self.state.bridge[mate] = None;
            self.state.first[mate] = w;
            self.state.queue.push_back(mate);
            self.counters.labeled += 1;
        }

        // 3: even neighbors on a different branch close an odd circle
        let first_v = self.state.first(v);
        let state = &mut self.state;
        let bridges = self.searcher.find_all(d, |i| {
            g.slot(v, i, probes)
                .is_some_and(|w| state.even[w] && state.tree.resolve(state.first[w]) != first_v)
        });
        for i in bridges {
            let Some(w) = g.slot(v, i, probes) else {
                continue;
            };
            if self.state.even[w] && self.state.first(w) != self.state.first(v) {
                self.collapse_blossom(v, w)?;
            }
        }
        Ok(Step::Continue)
    }

    /// Collapses the odd circle closed by the edge `(v, w)` between two even
    /// vertices on different branches.
    pub fn collapse_blossom(&mut self, v: usize, w: usize) -> Result<CollapseRecord> {
        let (r, s) = (self.state.first(v), self.state.first(w));
        if r == s {
            return Err(Error::Contract(format!(
                "({v}, {w}) is not a bridge: both sides resolve to {r}"
            )));
        }
        let sentinel = self.state.sentinel();
        let mut sets = [BTreeSet::new(), BTreeSet::new()];
        let mut chains: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        let mut cursor = [Some(r), Some(s)];
        let mut insertions = 0;
        let ancestor = 'search: loop {
            if cursor.iter().all(Option::is_none) {
                return Err(Error::Contract(format!(
                    "{v} and {w} have no common ancestor"
                )));
            }
            for side in 0..2 {
                let Some(x) = cursor[side] else { continue };
                insertions += 1;
                sets[side].insert(x);
                chains[side].push(x);
                if sets[1 - side].contains(&x) {
                    break 'search x;
                }
                cursor[side] = if x == sentinel {
                    None
                } else {
                    Some(self.next_odd(x)?)
                };
            }
        };
        let mut record = CollapseRecord {
            p1: 0,
            p2: 0,
            insertions,
        };
        for (side, (own, other)) in [(v, w), (w, v)].into_iter().enumerate() {
            let chain = &chains[side];
            let stop = chain
                .iter()
                .position(|&x| x == ancestor)
                .unwrap_or(chain.len());
            for &o in &chain[..stop] {
                self.state.even[o] = true;
                self.state.link[o] = Some(own);
                self.state.bridge[o] = Some(other);
                self.state.first[o] = ancestor;
                self.state.tree.attach(o, ancestor);
                self.state.queue.push_back(o);
            }
            if side == 0 {
                record.p1 = stop;
            } else {
                record.p2 = stop;
            }
        }
        self.counters.bridges += 1;
        self.counters.collapsed += record.p1 + record.p2;
        self.counters.insertions += insertions;
        self.counters.collapses.push(record);
        Ok(record)
    }

    // The next non-collapsed odd vertex after the odd vertex `x` on the path
    // to the root.
    fn next_odd(&mut self, x: usize) -> Result<usize> {
        let mate = self
            .matching
            .mate(x)
            .ok_or_else(|| Error::Invariant(format!("odd vertex {x} has no mate")))?;
        let link = self.state.link[mate]
            .ok_or_else(|| Error::Invariant(format!("even vertex {mate} has no link")))?;
        Ok(self.state.first(link))
    }

    pub fn run(mut self) -> Result<PhaseOutcome> {
        loop {
            match self.process_next()? {
                Step::Continue => {}
                Step::Augment(path) => return Ok(self.finish(Some(path))),
                Step::Exhausted => return Ok(self.finish(None)),
            }
        }
    }

    fn finish(self, path: Option<Vec<usize>>) -> PhaseOutcome {
        PhaseOutcome {
            even_count: self.state.even_count(),
            path,
            counters: self.counters,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOutcome {
    /// Augmenting path from a free vertex back to the start vertex.
    pub path: Option<Vec<usize>>,
    /// Even vertices at the end of the phase (`f`).
    pub even_count: usize,
    pub counters: PhaseCounters,
}

pub fn find_augmenting_path_from(
    g: &BlackBoxGraph,
    matching: &Matching,
    start: usize,
    searcher: &Searcher,
) -> Result<PhaseOutcome> {
    AlternatingSearch::new(g, matching, start, searcher)?.run()
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseRecord {
    pub start: usize,
    /// Edges on the augmenting path, if one was found.
    pub path_edges: Option<usize>,
    pub even_count: usize,
    pub counters: PhaseCounters,
    pub ledger: LedgerSnapshot,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralRunReport {
    pub phases: Vec<PhaseRecord>,
    pub ledger: LedgerSnapshot,
}

/// Searches once from every vertex that is free when its turn comes.
pub fn max_general_matching(
    g: &BlackBoxGraph,
    config: &OracleConfig,
) -> Result<(Matching, GeneralRunReport)> {
    if g.is_directed() {
        return Err(Error::InvalidArgument(
            "matching needs an undirected graph".into(),
        ));
    }
    let searcher = Searcher::new(config, g.n());
    let mut matching = Matching::empty(g.n());
    let mut phases = Vec::new();
    for start in 0..g.n() {
        if !matching.is_free(start) {
            continue;
        }
        let before = searcher.ledger().snapshot();
        let outcome = find_augmenting_path_from(g, &matching, start, &searcher)?;
        if let Some(path) = &outcome.path {
            matching.flip_path(path)?;
        }
        phases.push(PhaseRecord {
            start,
            path_edges: outcome.path.as_ref().map(|p| p.len() - 1),
            even_count: outcome.even_count,
            counters: outcome.counters,
            ledger: searcher.ledger().snapshot().since(&before),
        });
    }
    let report = GeneralRunReport {
        phases,
        ledger: searcher.ledger().snapshot(),
    };
    Ok((matching, report))
}
