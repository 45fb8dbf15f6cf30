//! Query-metered emulation of Grover-accelerated graph algorithms.
//!
//! Graphs are accessed only through black-box probes ([`graph`]); searches
//! over a vertex's neighborhood are answered by the emulated quantum
//! subroutines in [`quantum`], which charge a [`QueryLedger`]. On top of that
//! sit breadth-first layering ([`layers`]), bipartite matching by
//! vertex-disjoint shortest augmenting paths ([`bipartite`]), the blossom
//! algorithm for general matching ([`general`]) and blocking-flow max flow
//! ([`flow`]). [`baselines`] holds the classical oracles used to check them.

pub mod baselines;
pub mod bipartite;
pub mod error;
pub mod flow;
pub mod general;
pub mod graph;
pub mod layers;
pub mod quantum;
pub mod solution;

pub use bipartite::max_bipartite_matching;
pub use error::{Error, Result};
pub use flow::max_flow_integer;
pub use general::max_general_matching;
pub use graph::{
    BlackBoxGraph, Entry, IntegerNetwork, ListLayout, Model, ProbeCounter, SearchSpace,
};
pub use layers::{assign_layers, LayerAssignment};
pub use quantum::{Amplification, LedgerSnapshot, OracleConfig, QueryLedger, Rational, Searcher};
pub use solution::{IntegerFlow, Matching};
