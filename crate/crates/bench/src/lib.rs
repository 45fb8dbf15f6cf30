//! Fixed-seed inputs shared by the benchmarks.

use qgraph_core::graph::generate;
use qgraph_core::{BlackBoxGraph, IntegerNetwork, Model};

pub const SEED: u64 = 42;

/// Sparse digraph with `m = 4n`.
pub fn sparse_digraph(n: usize, model: Model) -> BlackBoxGraph {
    generate::random_digraph(n, 4 * n, SEED)
        .expect("digraph")
        .to_model(model)
}

/// Dense balanced bipartite graph on `n` vertices.
pub fn dense_bipartite(n: usize, model: Model) -> BlackBoxGraph {
    generate::random_bipartite(n / 2, n - n / 2, 0.5, SEED)
        .expect("bipartite graph")
        .to_model(model)
}

pub fn half_graph(n: usize, model: Model) -> BlackBoxGraph {
    generate::half_graph(n / 2)
        .expect("half graph")
        .to_model(model)
}

pub fn sparse_graph(n: usize, model: Model) -> BlackBoxGraph {
    generate::random_graph(n, 6.0 / n as f64, SEED)
        .expect("graph")
        .to_model(model)
}

pub fn network(n: usize, bound: u64, model: Model) -> IntegerNetwork {
    generate::random_network(n, 6 * n, bound, SEED)
        .expect("network")
        .to_model(model)
}
