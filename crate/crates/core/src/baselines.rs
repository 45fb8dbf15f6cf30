//! Classical reference oracles. These read the graph through unmetered
//! accessors and only need to be fast enough for desk-scale instances.
//!
//! Each quantity has two independent routes: branch-and-bound and subset
//! dynamic programming for matchings, Edmonds–Karp and cut enumeration for
//! flows.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, IntegerNetwork};
use crate::solution::{IntegerFlow, Matching};

pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Matching(Matching),
    Flow(IntegerFlow),
}

#[derive(Debug, Clone)]
pub struct OracleResult {
    pub value: i64,
    pub witness: Option<Witness>,
    pub elapsed: Duration,
}

fn guard(n: usize) -> Result<()> {
    if n > EXHAUSTIVE_LIMIT {
        Err(Error::TooLarge {
            n,
            limit: EXHAUSTIVE_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn undirected_adjacency(g: &BlackBoxGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.n()];
    for &(u, v) in g.edges() {
        adj[u].push(v);
        adj[v].push(u);
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

struct BranchAndBound<'a> {
    adj: &'a [Vec<usize>],
    used: Vec<bool>,
    pairs: Vec<(usize, usize)>,
    best: Vec<(usize, usize)>,
}

impl BranchAndBound<'_> {
    fn search(&mut self, from: usize) {
        let n = self.adj.len();
        let Some(v) = (from..n).find(|&v| !self.used[v]) else {
            if self.pairs.len() > self.best.len() {
                self.best = self.pairs.clone();
            }
            return;
        };
        let free = (v..n).filter(|&x| !self.used[x]).count();
        if self.pairs.len() + free / 2 <= self.best.len() {
            return;
        }
        self.used[v] = true;
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if !self.used[w] {
                self.used[w] = true;
                self.pairs.push((v, w));
                self.search(v + 1);
                self.pairs.pop();
                self.used[w] = false;
            }
        }
        // leave v unmatched
        self.search(v + 1);
        self.used[v] = false;
    }
}

/// Maximum matching by branch-and-bound over vertices. Treats the graph as
/// undirected.
pub fn brute_force_max_matching(g: &BlackBoxGraph) -> Result<OracleResult> {
    guard(g.n())?;
    let start = Instant::now();
    let adj = undirected_adjacency(g);
    let mut bb = BranchAndBound {
        adj: &adj,
        used: vec![false; g.n()],
        pairs: Vec::new(),
        best: Vec::new(),
    };
    bb.search(0);
    let matching = Matching::from_pairs(g.n(), &bb.best)?;
    Ok(OracleResult {
        value: matching.size() as i64,
        witness: Some(Witness::Matching(matching)),
        elapsed: start.elapsed(),
    })
}

/// Maximum matching size by dynamic programming over vertex subsets.
pub fn subset_dp_matching_size(g: &BlackBoxGraph) -> Result<usize> {
    guard(g.n())?;
    let n = g.n();
    let adj: Vec<u32> = undirected_adjacency(g)
        .iter()
        .map(|l| l.iter().fold(0u32, |acc, &w| acc | 1 << w))
        .collect();
    let mut best = vec![0u8; 1 << n];
    for mask in 1usize..1 << n {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << v);
        let mut value = best[rest];
        let mut cand = adj[v] as usize & rest;
        while cand != 0 {
            let w = cand.trailing_zeros() as usize;
            value = value.max(1 + best[rest & !(1 << w)]);
            cand &= cand - 1;
        }
        best[mask] = value;
    }
    Ok(best[(1 << n) - 1] as usize)
}

/// Two-coloring by classical BFS; `None` when an odd cycle exists.
pub fn two_coloring(g: &BlackBoxGraph) -> Option<Vec<bool>> {
    let adj = undirected_adjacency(g);
    let mut color: Vec<Option<bool>> = vec![None; g.n()];
    for root in 0..g.n() {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for &w in &adj[v] {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

/// Classical BFS distances over out-arcs.
pub fn bfs_layers(g: &BlackBoxGraph, start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

struct ResidualArc {
    to: usize,
    cap: i64,
    rev: usize,
}

/// Edmonds–Karp: shortest augmenting paths in the residual network.
pub fn edmonds_karp(net: &IntegerNetwork) -> OracleResult {
    let start = Instant::now();
    let n = net.n();
    let mut adj: Vec<Vec<ResidualArc>> = (0..n).map(|_| Vec::new()).collect();
    let mut forward = Vec::with_capacity(net.m());
    for arc in 0..net.m() {
        let (u, v) = net.arc(arc);
        let (iu, iv) = (adj[u].len(), adj[v].len());
        adj[u].push(ResidualArc {
            to: v,
            cap: net.capacity(arc) as i64,
            rev: iv,
        });
        adj[v].push(ResidualArc {
            to: u,
            cap: 0,
            rev: iu,
        });
        forward.push((u, iu));
    }
    let (s, t) = (net.source(), net.sink());
    let mut value = 0;
    loop {
        let mut pred: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for (i, a) in adj[v].iter().enumerate() {
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    pred[a.to] = Some((v, i));
                    queue.push_back(a.to);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = t;
        while let Some((u, i)) = pred[v] {
            bottleneck = bottleneck.min(adj[u][i].cap);
            v = u;
        }
        let mut v = t;
        while let Some((u, i)) = pred[v] {
            adj[u][i].cap -= bottleneck;
            let rev = adj[u][i].rev;
            adj[v][rev].cap += bottleneck;
            v = u;
        }
        value += bottleneck;
    }
    let flow: Vec<i64> = forward
        .iter()
        .enumerate()
        .map(|(arc, &(u, i))| net.capacity(arc) as i64 - adj[u][i].cap)
        .collect();
    let flow = IntegerFlow::from_arcs(net, flow);
    debug_assert_eq!(flow.value(), value);
    OracleResult {
        value,
        witness: Some(Witness::Flow(flow)),
        elapsed: start.elapsed(),
    }
}

/// Minimum s-t cut capacity by enumerating every source side.
pub fn min_cut_brute_force(net: &IntegerNetwork) -> Result<i64> {
    guard(net.n())?;
    let (s, t) = (net.source(), net.sink());
    let others: Vec<usize> = (0..net.n()).filter(|&v| v != s && v != t).collect();
    let mut best = i64::MAX;
    for bits in 0u32..1 << others.len() {
        let mut side = vec![false; net.n()];
        side[s] = true;
        for (i, &v) in others.iter().enumerate() {
            side[v] = bits >> i & 1 == 1;
        }
        let cut: i64 = (0..net.m())
            .filter(|&a| {
                let (u, v) = net.arc(a);
                side[u] && !side[v]
            })
            .map(|a| net.capacity(a) as i64)
            .sum();
        best = best.min(cut);
    }
    Ok(best)
}

/// Maximum bipartite matching through the unit-capacity flow reduction,
/// solved with Edmonds–Karp. For instances beyond the exhaustive limit.
pub fn bipartite_matching_via_flow(g: &BlackBoxGraph) -> Result<OracleResult> {
    let color =
        two_coloring(g).ok_or_else(|| Error::InvalidArgument("graph has an odd cycle".into()))?;
    let n = g.n();
    let (s, t) = (n, n + 1);
    let mut arcs = Vec::new();
    for (v, &right) in color.iter().enumerate() {
        if !right {
            arcs.push((s, v));
        } else {
            arcs.push((v, t));
        }
    }
    for &(u, v) in g.edges() {
        let (x, y) = if !color[u] { (u, v) } else { (v, u) };
        arcs.push((x, y));
    }
    let caps = vec![1; arcs.len()];
    let reduced = BlackBoxGraph::new(n + 2, arcs, true, crate::graph::Model::List)?;
    let net = IntegerNetwork::new(reduced, caps, s, t, 1)?;
    let mut result = edmonds_karp(&net);
    result.witness = None;
    Ok(result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    /// Path with more edges from the second matching: augmenting for the first.
    AugmentingForFirst,
    /// Path with more edges from the first matching.
    AugmentingForSecond,
    /// Path with equally many edges from both.
    EvenPath,
    EvenCycle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    /// Vertex sequence; for cycles the closing edge returns to the first vertex.
    pub vertices: Vec<usize>,
}

impl Component {
    pub fn edge_count(&self) -> usize {
        match self.kind {
            ComponentKind::EvenCycle => self.vertices.len(),
            _ => self.vertices.len() - 1,
        }
    }
}

/// Splits `first Δ second` into alternating paths and even cycles.
pub fn decompose_symmetric_difference(
    first: &Matching,
    second: &Matching,
) -> Result<Vec<Component>> {
    if first.n() != second.n() {
        return Err(Error::Contract(
            "matchings over different vertex sets".into(),
        ));
    }
    let n = first.n();
    // neighbors in the symmetric difference: (via first, via second)
    let sides = |v: usize| -> (Option<usize>, Option<usize>) {
        let a = first.mate(v).filter(|&w| !second.contains(v, w));
        let b = second.mate(v).filter(|&w| !first.contains(v, w));
        (a, b)
    };
    let degree = |v: usize| {
        let (a, b) = sides(v);
        usize::from(a.is_some()) + usize::from(b.is_some())
    };
    let mut visited = vec![false; n];
    let mut components = Vec::new();

    let walk = |start: usize, visited: &mut Vec<bool>| -> (Vec<usize>, usize, usize, bool) {
        let mut seq = vec![start];
        visited[start] = true;
        let (mut from_first, mut from_second) = (0, 0);
        let (a, b) = sides(start);
        // leave along the first-matching edge when possible
        let mut use_first = a.is_some() || b.is_none();
        let mut v = start;
        let mut closed = false;
        loop {
            let (a, b) = sides(v);
            let next = if use_first { a } else { b };
            let Some(w) = next else { break };
            if use_first {
                from_first += 1;
            } else {
                from_second += 1;
            }
            if w == start {
                closed = true;
                break;
            }
            if visited[w] {
                break;
            }
            visited[w] = true;
            seq.push(w);
            v = w;
            use_first = !use_first;
        }
        (seq, from_first, from_second, closed)
    };

    for v in 0..n {
        if !visited[v] && degree(v) == 1 {
            let (seq, a, b, _) = walk(v, &mut visited);
            let kind = match a.cmp(&b) {
                std::cmp::Ordering::Less => ComponentKind::AugmentingForFirst,
                std::cmp::Ordering::Greater => ComponentKind::AugmentingForSecond,
                std::cmp::Ordering::Equal => ComponentKind::EvenPath,
            };
            components.push(Component {
                kind,
                vertices: seq,
            });
        }
    }
    for v in 0..n {
        if !visited[v] && degree(v) == 2 {
            let (seq, _, _, closed) = walk(v, &mut visited);
            if !closed {
                return Err(Error::Invariant("cycle walk did not close".into()));
            }
            components.push(Component {
                kind: ComponentKind::EvenCycle,
                vertices: seq,
            });
        }
    }
    Ok(components)
}

pub fn count_augmenting_for_first(components: &[Component]) -> usize {
    components
        .iter()
        .filter(|c| c.kind == ComponentKind::AugmentingForFirst)
        .count()
}
