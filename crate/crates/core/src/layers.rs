//! Breadth-first layer numbers with Grover-search neighbor discovery.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::SearchSpace;
use crate::quantum::Searcher;

/// Layer numbers from a start vertex; `None` marks unreached vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerAssignment {
    pub start: usize,
    pub layer: Vec<Option<usize>>,
    pub visit_order: Vec<usize>,
    /// `n_v`: vertices first discovered while processing `v`.
    pub per_vertex_found: Vec<usize>,
}

impl LayerAssignment {
    #[inline]
    pub fn of(&self, v: usize) -> Option<usize> {
        self.layer[v]
    }

    pub fn reached(&self) -> usize {
        self.visit_order.len()
    }

    pub fn depth(&self) -> usize {
        self.layer.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Assigns BFS layers from `start`, discovering all unreached out-neighbors
/// of each dequeued vertex with one batch search over its domain.
pub fn assign_layers<G: SearchSpace + ?Sized>(
    g: &G,
    start: usize,
    searcher: &Searcher,
) -> LayerAssignment {
    let n = g.vertex_count();
    let mut layer = vec![None; n];
    let mut per_vertex_found = vec![0; n];
    let mut visit_order = vec![start];
    let mut queue = VecDeque::from([start]);
    layer[start] = Some(0);
    let probes = searcher.probes();

    while let Some(x) = queue.pop_front() {
        let next = layer[x].map(|l| l + 1);
        let hits = searcher.find_all(g.domain_len(x), |i| {
            g.slot(x, i, probes).is_some_and(|y| layer[y].is_none())
        });
        for i in hits {
            // a list may name the same neighbor in two slots
            if let Some(y) = g.slot(x, i, probes) {
                if layer[y].is_none() {
                    layer[y] = next;
                    per_vertex_found[x] += 1;
                    visit_order.push(y);
                    queue.push_back(y);
                }
            }
        }
    }

    LayerAssignment {
        start,
        layer,
        visit_order,
        per_vertex_found,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, BlackBoxGraph, Model};
    use crate::quantum::OracleConfig;

    #[test]
    fn directed_path() {
        let g =
            BlackBoxGraph::new(4, vec![(0, 1), (1, 2), (2, 3)], true, Model::Adjacency).unwrap();
        let s = Searcher::new(&OracleConfig::default(), 4);
        let la = assign_layers(&g, 0, &s);
        assert_eq!(la.layer, vec![Some(0), Some(1), Some(2), Some(3)]);
        let back = assign_layers(&g, 2, &s);
        assert_eq!(back.layer, vec![None, None, Some(0), Some(1)]);
    }

    #[test]
    fn star_leaves_in_layer_one() {
        for model in [Model::Adjacency, Model::List] {
            let g = generate::star(5).unwrap().to_model(model);
            let s = Searcher::new(&OracleConfig::with_seed(4), 6);
            let la = assign_layers(&g, 0, &s);
            assert!((1..=5).all(|v| la.of(v) == Some(1)));
            assert_eq!(la.per_vertex_found[0], 5);
            assert_eq!(la.per_vertex_found.iter().sum::<usize>(), la.reached() - 1);
        }
    }

    #[test]
    fn every_vertex_processed_once() {
        let g = generate::complete(6).unwrap().to_model(Model::Adjacency);
        let s = Searcher::new(&OracleConfig::default(), 6);
        let la = assign_layers(&g, 0, &s);
        // one batch search (and one emptiness check) per processed vertex
        assert_eq!(
            s.ledger().calls_of(crate::quantum::Primitive::GroverBatch),
            6
        );
        assert_eq!(la.visit_order.len(), 6);
    }
}
