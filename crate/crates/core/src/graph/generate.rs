//! Seeded instance generators. Every generator is a pure function of its
//! arguments and returns list-model graphs; use
//! [`BlackBoxGraph::to_model`] for the adjacency view.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, IntegerNetwork, Model};

fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "edge probability {p} not in (0, 1]"
        )))
    }
}

/// Random bipartite graph with sides `0..n1` and `n1..n1+n2`. Each cross pair
/// is an edge with probability `p`; an empty draw gets one uniform edge.
pub fn random_bipartite(n1: usize, n2: usize, p: f64, seed: u64) -> Result<BlackBoxGraph> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArgument("both sides need a vertex".into()));
    }
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for x in 0..n1 {
        for y in n1..n1 + n2 {
            if rng.gen_bool(p) {
                edges.push((x, y));
            }
        }
    }
    if edges.is_empty() {
        edges.push((rng.gen_range(0..n1), n1 + rng.gen_range(0..n2)));
    }
    BlackBoxGraph::new(n1 + n2, edges, false, Model::List)
}

/// Undirected G(n, p); an empty draw gets one uniform edge.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<BlackBoxGraph> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2 for an edge".into()));
    }
    check_probability(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    if edges.is_empty() {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        edges.push((u.min(v), u.max(v)));
    }
    BlackBoxGraph::new(n, edges, false, Model::List)
}

// Spanning arborescence rooted at `root` plus uniform extra arcs up to `m`.
fn rooted_arcs(
    n: usize,
    m: usize,
    root: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, usize)>> {
    if n < 2 {
        return Err(Error::InvalidArgument("need n >= 2".into()));
    }
    if m < n - 1 {
        return Err(Error::InvalidArgument(format!(
            "m = {m} < n - 1 = {}: cannot connect every vertex",
            n - 1
        )));
    }
    if m > n * (n - 1) {
        return Err(Error::InvalidArgument(format!("m = {m} exceeds n(n-1)")));
    }
    let mut order: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    order.shuffle(rng);
    order.insert(0, root);
    let mut arcs = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        arcs.push((parent, order[i]));
        seen.insert((parent, order[i]));
    }
    while arcs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && seen.insert((u, v)) {
            arcs.push((u, v));
        }
    }
    Ok(arcs)
}

/// Directed graph with `m` arcs in which every vertex is reachable from 0.
pub fn random_digraph(n: usize, m: usize, seed: u64) -> Result<BlackBoxGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = rooted_arcs(n, m, 0, &mut rng)?;
    BlackBoxGraph::new(n, arcs, true, Model::List)
}

/// Random s-t network: source 0, sink `n - 1`, every vertex reachable from the
/// source, capacities uniform in `[1, bound]`.
pub fn random_network(n: usize, m_target: usize, bound: u64, seed: u64) -> Result<IntegerNetwork> {
    if bound == 0 {
        return Err(Error::InvalidArgument("capacity bound must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs = rooted_arcs(n, m_target, 0, &mut rng)?;
    let capacity = arcs.iter().map(|_| rng.gen_range(1..=bound)).collect();
    let g = BlackBoxGraph::new(n, arcs, true, Model::List)?;
    IntegerNetwork::new(g, capacity, 0, n - 1, bound)
}

/// Four-layer network: source, two middle layers of width `p`, sink. The
/// terminals connect to their neighboring layer with capacity `n = 2p + 2`
/// and the middle layers are joined by `floor(p^2 / 2) + extra` random unit
/// arcs, which form the minimum cut.
pub fn majority_hard_instance(p: usize, extra: usize, seed: u64) -> Result<IntegerNetwork> {
    if p == 0 {
        return Err(Error::InvalidArgument("layer width p must be >= 1".into()));
    }
    if extra > 1 {
        return Err(Error::InvalidArgument("extra must be 0 or 1".into()));
    }
    let n = 2 * p + 2;
    let cross = p * p / 2 + extra;
    if cross > p * p {
        return Err(Error::InvalidArgument(format!(
            "{cross} middle arcs exceed p^2"
        )));
    }
    let (source, sink) = (0, n - 1);
    let left = |i: usize| 1 + i;
    let right = |i: usize| 1 + p + i;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (0..p).map(move |j| (i, j))).collect();
    pairs.shuffle(&mut rng);

    let cap = n as u64;
    let mut arcs = Vec::new();
    let mut capacity = Vec::new();
    for i in 0..p {
        arcs.push((source, left(i)));
        capacity.push(cap);
    }
    for &(i, j) in &pairs[..cross] {
        arcs.push((left(i), right(j)));
        capacity.push(1);
    }
    for j in 0..p {
        arcs.push((right(j), sink));
        capacity.push(cap);
    }
    let g = BlackBoxGraph::new(n, arcs, true, Model::List)?;
    IntegerNetwork::new(g, capacity, source, sink, cap)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<BlackBoxGraph> {
    let edges = (0..a)
        .flat_map(|x| (a..a + b).map(move |y| (x, y)))
        .collect();
    BlackBoxGraph::new(a + b, edges, false, Model::List)
}

/// Half graph on sides `0..h` and `h..2h`: `x_i` is adjacent to `y_j` for
/// every `j >= i`. Dense, with a unique perfect matching `x_i y_i`.
pub fn half_graph(h: usize) -> Result<BlackBoxGraph> {
    let edges = (0..h)
        .flat_map(|i| (i..h).map(move |j| (i, h + j)))
        .collect();
    BlackBoxGraph::new(2 * h, edges, false, Model::List)
}

pub fn complete(n: usize) -> Result<BlackBoxGraph> {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    BlackBoxGraph::new(n, edges, false, Model::List)
}

/// Path with `n` vertices.
pub fn path(n: usize) -> Result<BlackBoxGraph> {
    let edges = (1..n).map(|v| (v - 1, v)).collect();
    BlackBoxGraph::new(n, edges, false, Model::List)
}

pub fn cycle(n: usize) -> Result<BlackBoxGraph> {
    if n < 3 {
        return Err(Error::InvalidArgument("cycle needs n >= 3".into()));
    }
    let edges = (0..n).map(|v| (v, (v + 1) % n)).collect();
    BlackBoxGraph::new(n, edges, false, Model::List)
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Result<BlackBoxGraph> {
    let edges = (1..=leaves).map(|v| (0, v)).collect();
    BlackBoxGraph::new(leaves + 1, edges, false, Model::List)
}

pub fn petersen() -> BlackBoxGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    BlackBoxGraph::new(10, edges, false, Model::List).expect("petersen graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_graph_shape() {
        let g = half_graph(4).unwrap();
        assert_eq!(g.m(), 10);
        assert!(g.has_edge(0, 7) && g.has_edge(3, 7) && !g.has_edge(3, 4));
    }

    #[test]
    fn dense_bipartite_is_complete() {
        let g = random_bipartite(3, 3, 1.0, 99).unwrap();
        assert_eq!(g.m(), 9);
    }

    #[test]
    fn bipartite_is_reproducible() {
        let a = random_bipartite(2, 2, 0.5, 7).unwrap();
        let b = random_bipartite(2, 2, 0.5, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn sparse_draw_forces_one_edge() {
        let g = random_bipartite(1, 1, 0.0001, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert!(random_bipartite(1, 1, 0.0, 1).is_err());
    }

    #[test]
    fn two_vertex_network() {
        let net = random_network(2, 1, 1, 5).unwrap();
        assert_eq!(net.m(), 1);
        assert_eq!(net.arc(0), (0, 1));
        assert_eq!(net.capacity(0), 1);
    }

    #[test]
    fn unit_network_capacities() {
        let net = random_network(9, 20, 1, 3).unwrap();
        assert!(net.capacities().iter().all(|&c| c == 1));
    }

    #[test]
    fn network_needs_spanning_arcs() {
        assert!(matches!(
            random_network(5, 3, 2, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn majority_instance_shape() {
        let net = majority_hard_instance(3, 1, 4).unwrap();
        assert_eq!(net.n(), 8);
        assert_eq!(net.m(), 3 + 5 + 3);
        assert_eq!(net.bound(), 8);
        let unit = net.capacities().iter().filter(|&&c| c == 1).count();
        assert_eq!(unit, 5);
        let trivial = majority_hard_instance(1, 0, 0).unwrap();
        assert_eq!(trivial.m(), 2);
    }

    #[test]
    fn named_graphs() {
        assert_eq!(petersen().m(), 15);
        assert_eq!(complete(4).unwrap().m(), 6);
        assert_eq!(cycle(5).unwrap().m(), 5);
        assert_eq!(path(4).unwrap().m(), 3);
        assert_eq!(star(3).unwrap().m(), 3);
    }
}
