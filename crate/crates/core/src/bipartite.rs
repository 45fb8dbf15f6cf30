//! Maximum bipartite matching by phases of vertex-disjoint shortest
//! augmenting paths.
//!
//! Each phase works on the digraph `H` over `V1 ∪ V2 ∪ {a, b}`:
//!
//! * `a -> x` for every free `x ∈ V1`,
//! * `x -> y` for unmatched edges, `y -> x` for matched edges,
//! * `y -> b` for every free `y ∈ V2`.
//!
//! `H` is never materialized. [`AugmentingView`] answers slot queries on-line
//! from the black-box graph and the current matching, turning excluded list
//! entries into holes.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, Model, ProbeCounter, SearchSpace};
use crate::layers::{assign_layers, LayerAssignment};
use crate::quantum::{LedgerSnapshot, OracleConfig, Searcher};
use crate::solution::Matching;

/// Two-colors `g` with batch searches, then confirms with one single-item
/// search per vertex that no edge joins equal colors. `false` is the left
/// side `V1`.
pub fn two_color(g: &BlackBoxGraph, searcher: &Searcher) -> Result<Vec<bool>> {
    let n = g.n();
    let probes = searcher.probes();
    let mut color: Vec<Option<bool>> = vec![None; n];
    for root in 0..n {
        if color[root].is_some() {
            continue;
        }
        color[root] = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let other = color[v].map(|c| !c);
            let hits = searcher.find_all(g.domain_len(v), |i| {
                g.slot(v, i, probes).is_some_and(|w| color[w].is_none())
            });
            for i in hits {
                if let Some(w) = g.slot(v, i, probes) {
                    if color[w].is_none() {
                        color[w] = other;
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    let color: Vec<bool> = color.into_iter().map(|c| c.unwrap_or(false)).collect();
    for v in 0..n {
        let clash = searcher.find_one(g.domain_len(v), |i| {
            g.slot(v, i, probes).is_some_and(|w| color[w] == color[v])
        });
        if let Some(w) = clash.and_then(|i| g.slot(v, i, probes)) {
            return Err(Error::NotBipartite(v.min(w), v.max(w)));
        }
    }
    Ok(color)
}

/// On-line view of the augmenting digraph `H`. Vertex `n` is the source `a`,
/// vertex `n + 1` the sink `b`.
pub struct AugmentingView<'a> {
    base: &'a BlackBoxGraph,
    right: &'a [bool],
    matching: &'a Matching,
}

impl<'a> AugmentingView<'a> {
    pub fn new(base: &'a BlackBoxGraph, right: &'a [bool], matching: &'a Matching) -> Self {
        AugmentingView {
            base,
            right,
            matching,
        }
    }

    pub fn source(&self) -> usize {
        self.base.n()
    }

    pub fn sink(&self) -> usize {
        self.base.n() + 1
    }

    fn sink_slot(&self, y: usize) -> usize {
        match self.base.model() {
            Model::Adjacency => self.base.n() + 1,
            Model::List => self.base.domain_len(y),
        }
    }

    /// Sum of all domain lengths.
    pub fn total_domain(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.domain_len(v)).sum()
    }
}

impl SearchSpace for AugmentingView<'_> {
    fn vertex_count(&self) -> usize {
        self.base.n() + 2
    }

    fn domain_len(&self, v: usize) -> usize {
        let n = self.base.n();
        match self.base.model() {
            Model::Adjacency => n + 2,
            Model::List if v == self.source() => n,
            Model::List if v == self.sink() => 0,
            Model::List if self.right[v] => self.base.domain_len(v) + 1,
            Model::List => self.base.domain_len(v),
        }
    }

    fn slot(&self, v: usize, i: usize, probes: &ProbeCounter) -> Option<usize> {
        let n = self.base.n();
        if v == self.source() {
            // the list of a: holes at matched and right-side positions
            return (i < n && !self.right[i] && self.matching.is_free(i)).then_some(i);
        }
        if v == self.sink() {
            return None;
        }
        if self.right[v] && i == self.sink_slot(v) {
            return self.matching.is_free(v).then_some(self.sink());
        }
        if i >= self.base.domain_len(v) {
            return None;
        }
        let w = self.base.slot(v, i, probes)?;
        let matched = self.matching.contains(v, w);
        if self.right[v] {
            matched.then_some(w)
        } else {
            (!matched && self.right[w]).then_some(w)
        }
    }
}

/// Vertex-disjoint shortest augmenting paths found in one phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    /// Base-graph vertex sequences `x1 y1 x2 y2 ... yk` (without `a`, `b`).
    pub paths: Vec<Vec<usize>>,
    /// Shortest `a -> b` distance in `H`, if `b` is reachable.
    pub length: Option<usize>,
    pub layers: LayerAssignment,
}

/// Layers `H` from `a`, then extracts a maximal set of vertex-disjoint
/// shortest `a -> b` paths by depth-first search in which every descendant is
/// a single-item search over unmarked vertices of the next layer.
pub fn find_disjoint_augmenting_paths(view: &AugmentingView<'_>, searcher: &Searcher) -> PathSet {
    let (a, b) = (view.source(), view.sink());
    let layers = assign_layers(view, a, searcher);
    let Some(depth) = layers.of(b) else {
        return PathSet {
            paths: Vec::new(),
            length: None,
            layers,
        };
    };
    let probes = searcher.probes();
    let mut marked = vec![false; view.vertex_count()];
    let mut paths = Vec::new();
    let mut stack = Vec::with_capacity(depth + 1);
    loop {
        stack.clear();
        stack.push(a);
        while let Some(&v) = stack.last() {
            if v == b {
                break;
            }
            let next_layer = layers.of(v).map(|l| l + 1);
            let hit = searcher.find_one(view.domain_len(v), |i| {
                view.slot(v, i, probes).is_some_and(|w| {
                    !marked[w] && layers.of(w) == next_layer && (w == b || next_layer < Some(depth))
                })
            });
            match hit.and_then(|i| view.slot(v, i, probes)) {
                Some(w) => {
                    if w != b {
                        marked[w] = true;
                    }
                    stack.push(w);
                }
                // dead end: stays marked and is never entered again
                None => {
                    stack.pop();
                }
            }
        }
        if stack.is_empty() {
            break;
        }
        paths.push(stack[1..stack.len() - 1].to_vec());
    }
    PathSet {
        paths,
        length: Some(depth),
        layers,
    }
}

/// `M Δ (edges of paths)` for vertex-disjoint augmenting paths.
pub fn augment(matching: &Matching, paths: &[Vec<usize>]) -> Result<Matching> {
    let mut used = HashSet::new();
    for path in paths {
        if let Some(&v) = path.iter().find(|&&v| !used.insert(v)) {
            return Err(Error::Contract(format!(
                "augmenting paths share vertex {v}"
            )));
        }
    }
    let mut next = matching.clone();
    for path in paths {
        next.flip_path(path)?;
    }
    Ok(next)
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub paths_found: usize,
    /// Length of the augmenting paths in `H` (`a -> ... -> b`).
    pub path_length: Option<usize>,
    pub matching_size: usize,
    /// Sum of domain lengths of `H` in this phase.
    pub total_domain: usize,
    /// Ledger delta of the phase.
    pub ledger: LedgerSnapshot,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchingRunReport {
    pub iterations: Vec<IterationRecord>,
    /// Matching at the start of each iteration, then the final one.
    #[serde(skip)]
    pub intermediate: Vec<Matching>,
    /// Charge of the bipartiteness check.
    pub coloring: LedgerSnapshot,
    pub ledger: LedgerSnapshot,
}

impl MatchingRunReport {
    /// Path lengths of the augmenting iterations, in order.
    pub fn path_lengths(&self) -> Vec<usize> {
        self.iterations
            .iter()
            .filter_map(|it| it.path_length)
            .collect()
    }
}

/// `ceil(2 sqrt(n)) + 1`.
pub fn iteration_bound(n: usize) -> usize {
    crate::quantum::ceil_sqrt(4 * n as u64) as usize + 1
}

pub fn max_bipartite_matching(
    g: &BlackBoxGraph,
    config: &OracleConfig,
) -> Result<(Matching, MatchingRunReport)> {
    if g.is_directed() {
        return Err(Error::InvalidArgument(
            "matching needs an undirected graph".into(),
        ));
    }
    let searcher = Searcher::new(config, g.n());
    let color = two_color(g, &searcher)?;
    let coloring = searcher.ledger().snapshot();
    let mut matching = Matching::empty(g.n());
    let mut iterations = Vec::new();
    let mut intermediate = Vec::new();
    loop {
        intermediate.push(matching.clone());
        let before = searcher.ledger().snapshot();
        let view = AugmentingView::new(g, &color, &matching);
        let total_domain = view.total_domain();
        let found = find_disjoint_augmenting_paths(&view, &searcher);
        let next = augment(&matching, &found.paths)?;
        iterations.push(IterationRecord {
            paths_found: found.paths.len(),
            path_length: found.length,
            matching_size: next.size(),
            total_domain,
            ledger: searcher.ledger().snapshot().since(&before),
        });
        if found.paths.is_empty() {
            break;
        }
        matching = next;
    }
    intermediate.push(matching.clone());
    let report = MatchingRunReport {
        iterations,
        intermediate,
        coloring,
        ledger: searcher.ledger().snapshot(),
    };
    Ok((matching, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate;

    fn config() -> OracleConfig {
        OracleConfig::with_seed(11)
    }

    #[test]
    fn k22_has_two_shortest_paths() {
        for model in [Model::Adjacency, Model::List] {
            let g = generate::complete_bipartite(2, 2).unwrap().to_model(model);
            let s = Searcher::new(&config(), 4);
            let color = two_color(&g, &s).unwrap();
            let m = Matching::empty(4);
            let found = find_disjoint_augmenting_paths(&AugmentingView::new(&g, &color, &m), &s);
            assert_eq!(found.paths.len(), 2);
            assert_eq!(found.length, Some(3));
            assert!(found.paths.iter().all(|p| p.len() == 2));
        }
    }

    #[test]
    fn perfect_matching_has_no_paths() {
        let g = generate::complete_bipartite(3, 3).unwrap();
        let s = Searcher::new(&config(), 6);
        let color = two_color(&g, &s).unwrap();
        let m = Matching::from_pairs(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        let found = find_disjoint_augmenting_paths(&AugmentingView::new(&g, &color, &m), &s);
        assert!(found.paths.is_empty());
        assert_eq!(found.length, None);
    }

    #[test]
    fn augment_sizes() {
        let m = Matching::empty(4);
        let two = augment(&m, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!(two.size(), 2);
        assert_eq!(augment(&two, &[]).unwrap(), two);
        assert!(augment(&m, &[vec![0, 2], vec![0, 3]]).is_err());
    }

    #[test]
    fn augment_is_symmetric_difference() {
        // path graph 0-1-2-3 with (1,2) matched
        let m = Matching::from_pairs(4, &[(1, 2)]).unwrap();
        let next = augment(&m, &[vec![0, 1, 2, 3]]).unwrap();
        let before: HashSet<_> = m.pairs().into_iter().collect();
        let path: HashSet<_> = [(0, 1), (1, 2), (2, 3)].into_iter().collect();
        let expected: HashSet<_> = before.symmetric_difference(&path).copied().collect();
        assert_eq!(next.pairs().into_iter().collect::<HashSet<_>>(), expected);
    }

    #[test]
    fn complete_bipartite_and_path() {
        let k33 = generate::complete_bipartite(3, 3).unwrap();
        let (m, report) = max_bipartite_matching(&k33, &config()).unwrap();
        assert_eq!(m.size(), 3);
        assert!(report.iterations.len() <= 4);
        m.validate(&k33).unwrap();

        let p4 = generate::path(4).unwrap().to_model(Model::Adjacency);
        let (m, _) = max_bipartite_matching(&p4, &config()).unwrap();
        assert_eq!(m.size(), 2);
    }

    #[test]
    fn rejects_odd_cycle() {
        let c5 = generate::cycle(5).unwrap();
        assert!(matches!(
            max_bipartite_matching(&c5, &config()),
            Err(Error::NotBipartite(..))
        ));
    }

    #[test]
    fn bound_values() {
        assert_eq!(iteration_bound(6), 6);
        assert_eq!(iteration_bound(100), 21);
        assert_eq!(iteration_bound(1), 3);
    }
}
