use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, Model};

/// One residual direction of a network arc (or of a vertex pair, when the
/// adjacency model aggregates both antiparallel arcs into a single slot).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcRef {
    Forward(usize),
    Backward(usize),
    Pair { from: usize, to: usize },
}

/// Directed network with integer capacities in `[1, U]`.
///
/// Arc `i` is `graph.edges()[i]` with capacity `capacity[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerNetwork {
    graph: BlackBoxGraph,
    capacity: Vec<u64>,
    source: usize,
    sink: usize,
    bound: u64,
    // per tail: (head, arc) sorted by head
    out_arcs: Vec<Vec<(usize, usize)>>,
    // per head: arcs entering it, in arc order
    in_arcs: Vec<Vec<usize>>,
}

impl IntegerNetwork {
    pub fn new(
        graph: BlackBoxGraph,
        capacity: Vec<u64>,
        source: usize,
        sink: usize,
        bound: u64,
    ) -> Result<Self> {
        if !graph.is_directed() {
            return Err(Error::UndirectedNetwork);
        }
        let n = graph.n();
        for x in [source, sink] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if source == sink {
            return Err(Error::SourceIsSink(source));
        }
        if bound == 0 {
            return Err(Error::InvalidArgument(
                "capacity bound U must be >= 1".into(),
            ));
        }
        if capacity.len() != graph.m() {
            return Err(Error::InvalidArgument(format!(
                "{} capacities for {} arcs",
                capacity.len(),
                graph.m()
            )));
        }
        for (&(from, to), &c) in graph.edges().iter().zip(&capacity) {
            if c == 0 || c > bound {
                return Err(Error::InvalidCapacity {
                    from,
                    to,
                    capacity: c,
                    bound,
                });
            }
        }
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for (arc, &(u, v)) in graph.edges().iter().enumerate() {
            out_arcs[u].push((v, arc));
            in_arcs[v].push(arc);
        }
        for list in &mut out_arcs {
            list.sort_unstable();
        }
        Ok(IntegerNetwork {
            graph,
            capacity,
            source,
            sink,
            bound,
            out_arcs,
            in_arcs,
        })
    }

    pub fn graph(&self) -> &BlackBoxGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn m(&self) -> usize {
        self.graph.m()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// The capacity bound `U`.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn model(&self) -> Model {
        self.graph.model()
    }

    pub fn arc(&self, arc: usize) -> (usize, usize) {
        self.graph.edges()[arc]
    }

    pub fn capacity(&self, arc: usize) -> u64 {
        self.capacity[arc]
    }

    pub fn capacities(&self) -> &[u64] {
        &self.capacity
    }

    pub fn arc_between(&self, from: usize, to: usize) -> Option<usize> {
        let list = &self.out_arcs[from];
        list.binary_search_by_key(&to, |&(head, _)| head)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn out_arcs(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.out_arcs[v].iter().map(|&(_, arc)| arc)
    }

    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Whether some pair of vertices carries arcs in both directions.
    pub fn has_antiparallel_arcs(&self) -> bool {
        self.graph
            .edges()
            .iter()
            .any(|&(u, v)| self.arc_between(v, u).is_some())
    }

    pub fn to_model(&self, model: Model) -> Self {
        IntegerNetwork {
            graph: self.graph.to_model(model),
            ..self.clone()
        }
    }
}
