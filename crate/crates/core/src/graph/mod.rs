//! Black-box graphs in the adjacency-matrix and neighbor-list query models.
//!
//! Every read of edge data that an algorithm performs goes through
//! [`SearchSpace::slot`] (or the explicit [`BlackBoxGraph::probe_adjacency`] /
//! [`BlackBoxGraph::probe_list`] operations) and ticks a [`ProbeCounter`].
//! A vertex `v` exposes a *search domain* of `domain_len(v)` slots; in the
//! adjacency model slot `i` is the candidate neighbor `i`, in the list model it
//! is the `i`-th entry of `N_v`, which may be a hole.

use std::cell::Cell;
use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod generate;
pub mod io;
mod network;

pub use network::{ArcRef, IntegerNetwork};

/// Query interface a graph is accessed through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Adjacency,
    List,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Adjacency => "adjacency",
            Model::List => "list",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "adjacency" | "adj" => Ok(Model::Adjacency),
            "list" => Ok(Model::List),
            other => Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
        }
    }
}

/// One entry of a neighbor list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Entry {
    Neighbor(usize),
    Hole,
}

impl Entry {
    pub fn neighbor(self) -> Option<usize> {
        match self {
            Entry::Neighbor(w) => Some(w),
            Entry::Hole => None,
        }
    }
}

/// Hole placement for list-model graphs.
///
/// `padding` extra hole slots are added to every list (capped so that
/// `d_v <= n`). With `scatter` set, the entries of each list are shuffled with
/// the given seed so holes land at arbitrary positions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ListLayout {
    pub padding: usize,
    pub scatter: Option<u64>,
}

/// Counts classical probes of black-box data.
#[derive(Debug, Default, Clone)]
pub struct ProbeCounter(Cell<u64>);

impl ProbeCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn tick(&self) {
        self.0.set(self.0.get() + 1);
    }

    pub fn get(&self) -> u64 {
        self.0.get()
    }
}

/// A graph seen through per-vertex search domains.
///
/// `slot(v, i)` returns the neighbor stored in slot `i` of `v`'s domain, or
/// `None` for a non-edge / hole.
pub trait SearchSpace {
    fn vertex_count(&self) -> usize;
    fn domain_len(&self, v: usize) -> usize;
    fn slot(&self, v: usize, i: usize, probes: &ProbeCounter) -> Option<usize>;
}

/// A graph behind one of the two black-box query models.
#[derive(Clone, PartialEq, Eq)]
pub struct BlackBoxGraph {
    n: usize,
    directed: bool,
    model: Model,
    edges: Vec<(usize, usize)>,
    layout: ListLayout,
    // n*n bits, row-major; only populated in the adjacency model.
    matrix: Vec<u64>,
    // only populated in the list model.
    lists: Vec<Vec<Entry>>,
}

impl fmt::Debug for BlackBoxGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxGraph")
            .field("n", &self.n)
            .field("m", &self.edges.len())
            .field("directed", &self.directed)
            .field("model", &self.model)
            .finish()
    }
}

impl BlackBoxGraph {
    /// Builds a graph from an edge list. For undirected graphs each edge is
    /// listed once; `m` counts undirected edges.
    pub fn new(n: usize, edges: Vec<(usize, usize)>, directed: bool, model: Model) -> Result<Self> {
        Self::with_layout(n, edges, directed, model, ListLayout::default())
    }

    pub fn with_layout(
        n: usize,
        edges: Vec<(usize, usize)>,
        directed: bool,
        model: Model,
        layout: ListLayout,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::NoVertices);
        }
        if edges.is_empty() {
            return Err(Error::NoEdges);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let key = if directed {
                (u, v)
            } else {
                (u.min(v), u.max(v))
            };
            if !seen.insert(key) {
                return Err(Error::ParallelEdge(u, v));
            }
        }
        let mut g = BlackBoxGraph {
            n,
            directed,
            model,
            edges,
            layout,
            matrix: Vec::new(),
            lists: Vec::new(),
        };
        g.build_representation();
        Ok(g)
    }

    /// Directed list-model graph with explicitly placed holes. Rebuilding it
    /// through [`to_model`](Self::to_model) or [`to_layout`](Self::to_layout)
    /// discards the hole positions.
    pub fn from_lists(lists: Vec<Vec<Entry>>) -> Result<Self> {
        let n = lists.len();
        let edges: Vec<(usize, usize)> = lists
            .iter()
            .enumerate()
            .flat_map(|(v, list)| {
                list.iter()
                    .filter_map(move |e| e.neighbor().map(|w| (v, w)))
            })
            .collect();
        if let Some(v) = lists.iter().position(|l| l.len() > n) {
            return Err(Error::InvalidArgument(format!(
                "list of vertex {v} longer than n = {n}"
            )));
        }
        let mut g = Self::new(n, edges, true, Model::List)?;
        g.lists = lists;
        Ok(g)
    }

    fn build_representation(&mut self) {
        self.matrix.clear();
        self.lists.clear();
        match self.model {
            Model::Adjacency => {
                let n = self.n;
                self.matrix = vec![0u64; (n * n).div_ceil(64)];
                for i in 0..self.edges.len() {
                    let (u, v) = self.edges[i];
                    self.set_bit(u, v);
                    if !self.directed {
                        self.set_bit(v, u);
                    }
                }
            }
            Model::List => {
                let n = self.n;
                let mut lists: Vec<Vec<Entry>> = vec![Vec::new(); n];
                for &(u, v) in &self.edges {
                    lists[u].push(Entry::Neighbor(v));
                    if !self.directed {
                        lists[v].push(Entry::Neighbor(u));
                    }
                }
                let mut rng = self.layout.scatter.map(ChaCha8Rng::seed_from_u64);
                for list in &mut lists {
                    let target = (list.len() + self.layout.padding).min(n);
                    list.resize(target.max(list.len()), Entry::Hole);
                    if let Some(rng) = rng.as_mut() {
                        list.shuffle(rng);
                    }
                }
                self.lists = lists;
            }
        }
    }

    fn set_bit(&mut self, u: usize, v: usize) {
        let idx = u * self.n + v;
        self.matrix[idx / 64] |= 1 << (idx % 64);
    }

    #[inline]
    fn bit(&self, u: usize, v: usize) -> bool {
        let idx = u * self.n + v;
        self.matrix[idx / 64] >> (idx % 64) & 1 == 1
    }

    /// The same edge set behind a different query model.
    pub fn to_model(&self, model: Model) -> Self {
        let mut g = self.clone();
        g.model = model;
        g.build_representation();
        g
    }

    /// The same edge set with a different hole layout (list model only
    /// observes it).
    pub fn to_layout(&self, layout: ListLayout) -> Self {
        let mut g = self.clone();
        g.layout = layout;
        g.build_representation();
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges (undirected edges counted once).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn layout(&self) -> ListLayout {
        self.layout
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// List length `d_v` (list model) or `n` (adjacency model).
    pub fn degree_slots(&self, v: usize) -> usize {
        match self.model {
            Model::Adjacency => self.n,
            Model::List => self.lists[v].len(),
        }
    }

    /// Unmetered membership test, for validation and oracles only.
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match self.model {
            Model::Adjacency => self.bit(u, v),
            Model::List => self.lists[u].contains(&Entry::Neighbor(v)),
        }
    }

    /// Unmetered out-neighbors, for validation and oracles only.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        match self.model {
            Model::Adjacency => (0..self.n).filter(|&w| self.bit(v, w)).collect(),
            Model::List => self.lists[v].iter().filter_map(|e| e.neighbor()).collect(),
        }
    }

    /// Unmetered slot read; callers account for the probe themselves.
    #[inline]
    pub(crate) fn raw_slot(&self, v: usize, i: usize) -> Option<usize> {
        match self.model {
            Model::Adjacency => self.bit(v, i).then_some(i),
            Model::List => self.lists[v][i].neighbor(),
        }
    }

    /// Reads `A[v, w]`.
    pub fn probe_adjacency(&self, v: usize, w: usize, probes: &ProbeCounter) -> Result<bool> {
        if self.model != Model::Adjacency {
            return Err(Error::ModelMismatch {
                expected: Model::Adjacency,
                found: self.model,
            });
        }
        for x in [v, w] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    n: self.n,
                });
            }
        }
        probes.tick();
        Ok(self.bit(v, w))
    }

    /// Reads `N_v[i]`.
    pub fn probe_list(&self, v: usize, i: usize, probes: &ProbeCounter) -> Result<Entry> {
        if self.model != Model::List {
            return Err(Error::ModelMismatch {
                expected: Model::List,
                found: self.model,
            });
        }
        if v >= self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            });
        }
        let list = &self.lists[v];
        let entry = list.get(i).copied().ok_or(Error::SlotOutOfRange {
            vertex: v,
            slot: i,
            len: list.len(),
        })?;
        probes.tick();
        Ok(entry)
    }
}

impl SearchSpace for BlackBoxGraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn domain_len(&self, v: usize) -> usize {
        self.degree_slots(v)
    }

    #[inline]
    fn slot(&self, v: usize, i: usize, probes: &ProbeCounter) -> Option<usize> {
        probes.tick();
        self.raw_slot(v, i)
    }
}
