//! Solution objects with self-validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, IntegerNetwork};

/// A set of vertex-disjoint edges, stored as a mate table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching {
            mate: vec![None; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Self::empty(n);
        for &(u, v) in pairs {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v || m.mate[u].is_some() || m.mate[v].is_some() {
                return Err(Error::Contract(format!(
                    "pair ({u}, {v}) is not vertex-disjoint"
                )));
            }
            m.mate[u] = Some(v);
            m.mate[v] = Some(u);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.mate.len()
    }

    #[inline]
    pub fn mate(&self, v: usize) -> Option<usize> {
        self.mate[v]
    }

    #[inline]
    pub fn is_free(&self, v: usize) -> bool {
        self.mate[v].is_none()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        self.mate[u] == Some(v)
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    /// Matched pairs `(u, v)` with `u < v`, in increasing order of `u`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, &m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub(crate) fn set_pair(&mut self, u: usize, v: usize) {
        self.mate[u] = Some(v);
        self.mate[v] = Some(u);
    }

    /// Flips an alternating path `v0 v1 ... v_{2k+1}` whose end vertices are
    /// free: edges `(v0,v1), (v2,v3), ...` become matched.
    pub fn flip_path(&mut self, path: &[usize]) -> Result<()> {
        self.check_augmenting(path)?;
        for pair in path.chunks(2) {
            self.set_pair(pair[0], pair[1]);
        }
        Ok(())
    }

    /// Checks that `path` is a simple alternating path between two free
    /// vertices, starting and ending with unmatched edges.
    pub fn check_augmenting(&self, path: &[usize]) -> Result<()> {
        if path.len() < 2 || !path.len().is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "augmenting path must have an even number of vertices, got {}",
                path.len()
            )));
        }
        let mut seen = std::collections::HashSet::with_capacity(path.len());
        if let Some(&v) = path.iter().find(|&&v| v >= self.n() || !seen.insert(v)) {
            return Err(Error::Contract(format!(
                "vertex {v} repeated or out of range on path"
            )));
        }
        let (first, last) = (path[0], path[path.len() - 1]);
        if !self.is_free(first) || !self.is_free(last) {
            return Err(Error::Contract(
                "augmenting path endpoints must be free".into(),
            ));
        }
        for (i, w) in path.windows(2).enumerate() {
            let matched = self.contains(w[0], w[1]);
            if matched != (i % 2 == 1) {
                return Err(Error::Contract(format!(
                    "edge ({}, {}) breaks alternation",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    /// Checks the mate table is a symmetric involution and every pair is an
    /// edge of `g`.
    pub fn validate(&self, g: &BlackBoxGraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::Invariant(format!(
                "matching over {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        for (u, &m) in self.mate.iter().enumerate() {
            if let Some(v) = m {
                if v >= self.n() || self.mate[v] != Some(u) || u == v {
                    return Err(Error::Invariant(format!("mate table not symmetric at {u}")));
                }
                if !(g.has_edge(u, v) || g.has_edge(v, u)) {
                    return Err(Error::Invariant(format!(
                        "matched pair ({u}, {v}) is not an edge"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Per-arc integer flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerFlow {
    flow: Vec<i64>,
    value: i64,
}

impl IntegerFlow {
    pub fn zero(net: &IntegerNetwork) -> Self {
        IntegerFlow {
            flow: vec![0; net.m()],
            value: 0,
        }
    }

    pub fn from_arcs(net: &IntegerNetwork, flow: Vec<i64>) -> Self {
        let mut f = IntegerFlow { flow, value: 0 };
        f.value = f.net_outflow(net, net.source());
        f
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    #[inline]
    pub fn on(&self, arc: usize) -> i64 {
        self.flow[arc]
    }

    pub fn arcs(&self) -> &[i64] {
        &self.flow
    }

    pub(crate) fn add(&mut self, arc: usize, delta: i64) {
        self.flow[arc] += delta;
    }

    pub(crate) fn set_value(&mut self, value: i64) {
        self.value = value;
    }

    pub fn net_outflow(&self, net: &IntegerNetwork, v: usize) -> i64 {
        let out: i64 = net.out_arcs(v).map(|a| self.flow[a]).sum();
        let inflow: i64 = net.in_arcs(v).iter().map(|&a| self.flow[a]).sum();
        out - inflow
    }

    /// Capacity bounds, conservation away from the terminals, and
    /// `value` = net outflow of the source.
    pub fn validate(&self, net: &IntegerNetwork) -> Result<()> {
        if self.flow.len() != net.m() {
            return Err(Error::Invariant(
                "flow vector length differs from arc count".into(),
            ));
        }
        for (arc, &f) in self.flow.iter().enumerate() {
            if f < 0 || f > net.capacity(arc) as i64 {
                let (u, v) = net.arc(arc);
                return Err(Error::Invariant(format!(
                    "flow {f} on arc ({u}, {v}) violates capacity {}",
                    net.capacity(arc)
                )));
            }
        }
        for v in 0..net.n() {
            if v != net.source() && v != net.sink() && self.net_outflow(net, v) != 0 {
                return Err(Error::Invariant(format!(
                    "conservation fails at vertex {v}"
                )));
            }
        }
        if self.net_outflow(net, net.source()) != self.value {
            return Err(Error::Invariant(
                "flow value differs from source outflow".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, Model};

    #[test]
    fn pairs_and_size() {
        let m = Matching::from_pairs(4, &[(2, 1), (0, 3)]).unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.pairs(), vec![(0, 3), (1, 2)]);
        assert!(Matching::from_pairs(4, &[(0, 1), (1, 2)]).is_err());
    }

    #[test]
    fn flip_alternating_path() {
        let g = generate::path(4).unwrap();
        let mut m = Matching::from_pairs(4, &[(1, 2)]).unwrap();
        m.flip_path(&[0, 1, 2, 3]).unwrap();
        assert_eq!(m.pairs(), vec![(0, 1), (2, 3)]);
        m.validate(&g).unwrap();
    }

    #[test]
    fn rejects_non_alternating_path() {
        let mut m = Matching::from_pairs(6, &[(1, 2)]).unwrap();
        assert!(m.flip_path(&[0, 3, 4, 5]).is_err());
        assert!(m.flip_path(&[0, 1, 2]).is_err());
        let mut e = Matching::empty(4);
        assert!(e.flip_path(&[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn validate_catches_non_edge() {
        let g = generate::path(4).unwrap();
        let m = Matching::from_pairs(4, &[(0, 2)]).unwrap();
        assert!(m.validate(&g).is_err());
    }

    #[test]
    fn flow_validation() {
        let g = BlackBoxGraph::new(3, vec![(0, 1), (1, 2)], true, Model::List).unwrap();
        let net = IntegerNetwork::new(g, vec![2, 1], 0, 2, 2).unwrap();
        let ok = IntegerFlow::from_arcs(&net, vec![1, 1]);
        assert_eq!(ok.value(), 1);
        ok.validate(&net).unwrap();
        assert!(IntegerFlow::from_arcs(&net, vec![2, 1])
            .validate(&net)
            .is_err());
        assert!(IntegerFlow::from_arcs(&net, vec![2, 2])
            .validate(&net)
            .is_err());
    }
}
