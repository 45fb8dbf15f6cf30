//! Integer maximum flow: blocking flows on layered residual networks while
//! the layered depth stays at most `k`, then one augmenting path per layered
//! network.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{ArcRef, IntegerNetwork, Model, ProbeCounter, SearchSpace};
use crate::layers::{assign_layers, LayerAssignment};
use crate::quantum::{LedgerSnapshot, OracleConfig, Searcher};
use crate::solution::IntegerFlow;

/// Residual network of a network under a flow, with capacities computed on
/// demand from the stored per-arc flow.
///
/// Adjacency model: slot `w` of `v` is the vertex pair `(v, w)` with residual
/// `c(v,w) - f(v,w) + f(w,v)`. List model: the out-list of `v` followed by
/// one slot per arc entering `v`, each carrying a single arc direction.
#[derive(Debug, Clone)]
pub struct ResidualView<'a> {
    net: &'a IntegerNetwork,
    flow: IntegerFlow,
}

impl<'a> ResidualView<'a> {
    pub fn new(net: &'a IntegerNetwork, flow: IntegerFlow) -> Self {
        ResidualView { net, flow }
    }

    pub fn network(&self) -> &IntegerNetwork {
        self.net
    }

    pub fn flow(&self) -> &IntegerFlow {
        &self.flow
    }

    pub fn into_flow(self) -> IntegerFlow {
        self.flow
    }

    pub fn residual(&self, arc: ArcRef) -> u64 {
        match arc {
            ArcRef::Forward(a) => self.net.capacity(a) - self.flow.on(a) as u64,
            ArcRef::Backward(a) => self.flow.on(a) as u64,
            ArcRef::Pair { from, to } => {
                let fwd = self.net.arc_between(from, to);
                let rev = self.net.arc_between(to, from);
                fwd.map_or(0, |a| self.residual(ArcRef::Forward(a)))
                    + rev.map_or(0, |a| self.residual(ArcRef::Backward(a)))
            }
        }
    }

    /// Unmetered slot contents: head vertex, arc direction and residual
    /// (possibly zero). `None` for holes and vertex pairs without arcs.
    pub fn entry(&self, v: usize, i: usize) -> Option<(usize, ArcRef, u64)> {
        let net = self.net;
        match net.model() {
            Model::Adjacency => {
                if i == v || (net.arc_between(v, i).is_none() && net.arc_between(i, v).is_none()) {
                    return None;
                }
                let arc = ArcRef::Pair { from: v, to: i };
                Some((i, arc, self.residual(arc)))
            }
            Model::List => {
                let d = net.graph().degree_slots(v);
                let arc = if i < d {
                    let w = net.graph().raw_slot(v, i)?;
                    ArcRef::Forward(net.arc_between(v, w)?)
                } else {
                    ArcRef::Backward(net.in_arcs(v)[i - d])
                };
                let head = match arc {
                    ArcRef::Forward(a) => net.arc(a).1,
                    ArcRef::Backward(a) => net.arc(a).0,
                    ArcRef::Pair { .. } => unreachable!(),
                };
                Some((head, arc, self.residual(arc)))
            }
        }
    }

    /// Out-neighbors with positive residual, aggregated per neighbor.
    /// Unmetered, for checks and oracles.
    pub fn residual_neighbors(&self, v: usize) -> Vec<(usize, u64)> {
        let mut out: Vec<(usize, u64)> = Vec::new();
        for i in 0..self.domain_len(v) {
            if let Some((w, _, r)) = self.entry(v, i).filter(|e| e.2 > 0) {
                match out.iter_mut().find(|(x, _)| *x == w) {
                    Some((_, total)) => *total += r,
                    None => out.push((w, r)),
                }
            }
        }
        out
    }

    pub fn augment(&mut self, path: &[ArcRef], amount: u64) -> Result<()> {
        let delta = amount as i64;
        for &arc in path {
            if self.residual(arc) < amount {
                return Err(Error::Invariant(format!(
                    "augmenting {amount} over {arc:?} exceeds residual"
                )));
            }
            match arc {
                ArcRef::Forward(a) => self.flow.add(a, delta),
                ArcRef::Backward(a) => self.flow.add(a, -delta),
                ArcRef::Pair { from, to } => {
                    let mut rest = delta;
                    if let Some(rev) = self.net.arc_between(to, from) {
                        let cancel = rest.min(self.flow.on(rev));
                        self.flow.add(rev, -cancel);
                        rest -= cancel;
                    }
                    if rest > 0 {
                        let fwd = self
                            .net
                            .arc_between(from, to)
                            .ok_or_else(|| Error::Invariant(format!("no arc ({from}, {to})")))?;
                        self.flow.add(fwd, rest);
                    }
                }
            }
        }
        let value = self.flow.value() + delta;
        self.flow.set_value(value);
        Ok(())
    }
}

impl SearchSpace for ResidualView<'_> {
    fn vertex_count(&self) -> usize {
        self.net.n()
    }

    fn domain_len(&self, v: usize) -> usize {
        match self.net.model() {
            Model::Adjacency => self.net.n(),
            Model::List => self.net.graph().degree_slots(v) + self.net.in_arcs(v).len(),
        }
    }

    #[inline]
    fn slot(&self, v: usize, i: usize, probes: &ProbeCounter) -> Option<usize> {
        probes.tick();
        self.entry(v, i).filter(|e| e.2 > 0).map(|e| e.0)
    }
}

fn least_root(value: u128, power: u32) -> u128 {
    let mut c = (value as f64).powf(1.0 / power as f64).floor() as u128;
    while c > 0 && c.pow(power) >= value {
        c -= 1;
    }
    while c.pow(power) < value {
        c += 1;
    }
    c
}

/// Depth threshold `k` after which phases look for single augmenting paths:
/// the ceiling of `min(n^(2/3) U^(1/3), sqrt(mU))` when `U^4 <= n`, else of
/// `min(n^(2/3), sqrt(m))`.
pub fn switching_threshold(n: usize, m: usize, bound: u64) -> usize {
    let (n, m, u) = (n.max(1) as u128, m.max(1) as u128, bound.max(1) as u128);
    let k = if u.pow(4) <= n {
        least_root(n * n * u, 3).min(least_root(m * u, 2))
    } else {
        least_root(n * n, 3).min(least_root(m, 2))
    };
    k as usize
}

/// Upper bound on the residual flow value when the layered depth is
/// `depth`: `min(ceil((2n/depth)^2), ceil(m/depth)) * U`.
pub fn residual_flow_bound(n: usize, m: usize, bound: u64, depth: usize) -> u64 {
    let d = depth.max(1) as u64;
    let (n, m) = (n as u64, m as u64);
    let square = (2 * n * 2 * n).div_ceil(d * d);
    square.min(m.div_ceil(d)) * bound
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseMode {
    BlockingFlow,
    SingleAugmenting,
}

/// One search for an outgoing arc of `v` during a phase, kept for the
/// degree-bound check.
#[derive(Debug, Clone, Copy)]
struct SearchEvent {
    vertex: usize,
    // usable out-arcs of v at the time of the search
    usable: usize,
    // paths through v completed before the search
    paths_before: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseStats {
    pub index: usize,
    pub mode: PhaseMode,
    /// Layered depth `j` (distance of the sink).
    pub depth: usize,
    /// Number of augmenting paths found (`A_j`).
    pub paths: u64,
    /// Flow value added by the phase.
    pub pushed: u64,
    pub flow_before: i64,
    /// `a_v`: augmenting paths entering `v`.
    pub a: Vec<u64>,
    /// `c_v`: times `v` was disabled as a dead end.
    pub c: Vec<u64>,
    /// `d_v`: arc searches issued from `v`.
    pub d: Vec<u64>,
    pub degree_checks: u64,
    pub degree_violations: u64,
    #[serde(skip)]
    pub layers: Option<LayerAssignment>,
    pub ledger: LedgerSnapshot,
}

impl PhaseStats {
    /// Sum of `a_v` over each layer, indexed by layer.
    pub fn layer_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.depth + 1];
        if let Some(layers) = &self.layers {
            for (v, &a) in self.a.iter().enumerate() {
                if let Some(l) = layers.of(v).filter(|&l| l <= self.depth) {
                    sums[l] += a;
                }
            }
        }
        sums
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowRunReport {
    pub threshold: usize,
    pub phases: Vec<PhaseStats>,
    /// Index of the first single-path phase.
    pub switched_at: Option<usize>,
    /// `sum_j sqrt(j A_j) / k^(3/2)` over blocking-flow phases.
    pub dyadic_constant: f64,
    pub ledger: LedgerSnapshot,
}

impl FlowRunReport {
    pub fn blocking_phases(&self) -> usize {
        self.phases
            .iter()
            .filter(|p| p.mode == PhaseMode::BlockingFlow)
            .count()
    }

    pub fn single_phases(&self) -> usize {
        self.phases.len() - self.blocking_phases()
    }
}

/// Saturates the layered residual network (or finds at most `limit` paths),
/// augmenting `view` in place.
pub fn blocking_flow(
    view: &mut ResidualView<'_>,
    layers: &LayerAssignment,
    searcher: &Searcher,
    limit: Option<u64>,
    check_degrees: bool,
) -> Result<PhaseStats> {
    let n = view.vertex_count();
    let (s, t) = (view.network().source(), view.network().sink());
    let depth = layers
        .of(t)
        .ok_or_else(|| Error::Contract("sink not reached by the layers".into()))?;
    let slot_cap = match view.network().model() {
        Model::Adjacency if view.network().has_antiparallel_arcs() => 2 * view.network().bound(),
        _ => view.network().bound(),
    };
    let mut enabled = vec![true; n];
    let mut stats = PhaseStats {
        index: 0,
        mode: PhaseMode::BlockingFlow,
        depth,
        paths: 0,
        pushed: 0,
        flow_before: view.flow().value(),
        a: vec![0; n],
        c: vec![0; n],
        d: vec![0; n],
        degree_checks: 0,
        degree_violations: 0,
        layers: None,
        ledger: searcher.ledger().snapshot(),
    };
    let before = searcher.ledger().snapshot();
    let mut events = Vec::new();
    let probes = searcher.probes();
    let next_layer = |w: usize, v: usize| match (layers.of(v), layers.of(w)) {
        (Some(lv), Some(lw)) => lw == lv + 1 && (lw < depth || w == t),
        _ => false,
    };

    let mut stack = vec![s];
    let mut arcs: Vec<ArcRef> = Vec::new();
    while let Some(&v) = stack.last() {
        if v == t {
            let mu = arcs.iter().map(|&a| view.residual(a)).min().unwrap_or(0);
            view.augment(&arcs, mu)?;
            for &x in &stack[1..] {
                stats.a[x] += 1;
            }
            stats.paths += 1;
            stats.pushed += mu;
            if limit.is_some_and(|l| stats.paths >= l) {
                break;
            }
            stack.truncate(1);
            arcs.clear();
            continue;
        }
        let domain = view.domain_len(v);
        if check_degrees {
            let usable = (0..domain)
                .filter(|&i| {
                    view.entry(v, i)
                        .is_some_and(|(w, _, r)| r > 0 && enabled[w] && next_layer(w, v))
                })
                .count();
            events.push(SearchEvent {
                vertex: v,
                usable,
                paths_before: if v == s { stats.paths } else { stats.a[v] },
            });
        }
        stats.d[v] += 1;
        let view_ref = &*view;
        let hit = searcher.find_one(domain, |i| {
            view_ref
                .slot(v, i, probes)
                .is_some_and(|w| enabled[w] && next_layer(w, v))
        });
        match hit.and_then(|i| view.entry(v, i)) {
            Some((w, arc, r)) if r > 0 => {
                stack.push(w);
                arcs.push(arc);
            }
            _ => {
                enabled[v] = false;
                stats.c[v] += 1;
                stack.pop();
                arcs.pop();
            }
        }
    }

    for e in events {
        // a_v counts paths entering v; the source is never entered
        let through = if e.vertex == s {
            stats.paths
        } else {
            stats.a[e.vertex]
        };
        let remaining = through - e.paths_before.min(through);
        stats.degree_checks += 1;
        if (e.usable as u64) < remaining.div_ceil(slot_cap) {
            stats.degree_violations += 1;
        }
    }
    stats.ledger = searcher.ledger().snapshot().since(&before);
    Ok(stats)
}

pub fn max_flow_integer(
    net: &IntegerNetwork,
    config: &OracleConfig,
) -> Result<(IntegerFlow, FlowRunReport)> {
    max_flow_with(net, config, false)
}

/// Like [`max_flow_integer`], optionally recording the degree-bound check
/// for every arc search (quadratic classical overhead). Violations are
/// counted in [`PhaseStats::degree_violations`].
pub fn max_flow_with(
    net: &IntegerNetwork,
    config: &OracleConfig,
    check_degrees: bool,
) -> Result<(IntegerFlow, FlowRunReport)> {
    let threshold = switching_threshold(net.n(), net.m(), net.bound());
    let searcher = Searcher::new(config, net.n());
    let mut view = ResidualView::new(net, IntegerFlow::zero(net));
    let mut phases: Vec<PhaseStats> = Vec::new();
    let mut switched_at = None;
    loop {
        let before = searcher.ledger().snapshot();
        let layers = assign_layers(&view, net.source(), &searcher);
        let Some(depth) = layers.of(net.sink()) else {
            break;
        };
        if switched_at.is_none() && depth > threshold {
            switched_at = Some(phases.len());
        }
        let limit = switched_at.map(|_| 1);
        let mut stats = blocking_flow(&mut view, &layers, &searcher, limit, check_degrees)?;
        stats.index = phases.len();
        if limit.is_some() {
            stats.mode = PhaseMode::SingleAugmenting;
        }
        stats.layers = Some(layers);
        stats.ledger = searcher.ledger().snapshot().since(&before);
        phases.push(stats);
    }
    let k = threshold.max(1) as f64;
    let dyadic_constant = phases
        .iter()
        .filter(|p| p.mode == PhaseMode::BlockingFlow)
        .map(|p| ((p.depth as f64) * p.paths as f64).sqrt())
        .sum::<f64>()
        / k.powf(1.5);
    let flow = view.into_flow();
    let report = FlowRunReport {
        threshold,
        phases,
        switched_at,
        dyadic_constant,
        ledger: searcher.ledger().snapshot(),
    };
    Ok((flow, report))
}

/// Residual bound at every phase: `true_max - flow_before` must
/// not exceed [`residual_flow_bound`] at the phase's depth.
pub fn residual_bound_check(
    net: &IntegerNetwork,
    report: &FlowRunReport,
    true_max: i64,
) -> Vec<bool> {
    report
        .phases
        .iter()
        .map(|p| {
            let residual = (true_max - p.flow_before).max(0) as u64;
            residual <= residual_flow_bound(net.n(), net.m(), net.bound(), p.depth)
        })
        .collect()
}

/// Phase-count bounds: blocking phases at most `k`, single-path phases at
/// most four times the residual bound at depth `k`.
pub fn phase_count_check(net: &IntegerNetwork, report: &FlowRunReport) -> (bool, bool) {
    let k = report.threshold;
    let post = 4 * residual_flow_bound(net.n(), net.m(), net.bound(), k);
    (
        report.blocking_phases() <= k,
        report.single_phases() as u64 <= post,
    )
}

/// Whether the layered depth strictly increases across blocking phases.
pub fn depth_monotone(report: &FlowRunReport) -> bool {
    report
        .phases
        .iter()
        .filter(|p| p.mode == PhaseMode::BlockingFlow)
        .map(|p| p.depth)
        .collect::<Vec<_>>()
        .windows(2)
        .all(|w| w[0] < w[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BlackBoxGraph;

    fn network(n: usize, arcs: &[(usize, usize, u64)], model: Model, bound: u64) -> IntegerNetwork {
        let g = BlackBoxGraph::new(
            n,
            arcs.iter().map(|&(u, v, _)| (u, v)).collect(),
            true,
            model,
        )
        .unwrap();
        IntegerNetwork::new(g, arcs.iter().map(|a| a.2).collect(), 0, n - 1, bound).unwrap()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(switching_threshold(64, 1_000_000, 1), 16);
        assert_eq!(switching_threshold(16, 4, 1), 2);
        // 81^(2/3) 3^(1/3) = 27 against ceil(sqrt(300)) = 18
        assert_eq!(switching_threshold(81, 100, 3), 18);
        // U^4 > n: falls back to min(n^(2/3), sqrt(m))
        assert_eq!(switching_threshold(8, 100, 2), 4);
    }

    #[test]
    fn residual_flow_bound_examples() {
        assert_eq!(residual_flow_bound(8, 12, 1, 4), 3);
        assert_eq!(residual_flow_bound(8, 12, 2, 1), 24);
    }

    #[test]
    fn unit_path() {
        for model in [Model::Adjacency, Model::List] {
            let net = network(4, &[(0, 1, 1), (1, 2, 1), (2, 3, 1)], model, 1);
            let (flow, report) = max_flow_with(&net, &OracleConfig::with_seed(1), true).unwrap();
            assert_eq!(flow.value(), 1);
            assert_eq!(report.phases.len(), 1);
            assert_eq!((report.phases[0].depth, report.phases[0].paths), (3, 1));
            flow.validate(&net).unwrap();
        }
    }

    #[test]
    fn two_parallel_paths() {
        let net = network(
            4,
            &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)],
            Model::List,
            1,
        );
        let (flow, report) = max_flow_integer(&net, &OracleConfig::with_seed(1)).unwrap();
        assert_eq!(flow.value(), 2);
        assert_eq!(report.phases[0].paths, 2);
        assert_eq!(report.phases[0].layer_sums(), vec![0, 2, 2]);
    }

    #[test]
    fn single_arc() {
        let net = network(2, &[(0, 1, 5)], Model::Adjacency, 5);
        let (flow, report) = max_flow_integer(&net, &OracleConfig::with_seed(1)).unwrap();
        assert_eq!(flow.value(), 5);
        assert_eq!(report.phases.len(), 1);
    }

    #[test]
    fn unreachable_sink() {
        let net = network(3, &[(0, 1, 2)], Model::List, 2);
        let (flow, report) = max_flow_integer(&net, &OracleConfig::with_seed(1)).unwrap();
        assert_eq!(flow.value(), 0);
        assert!(report.phases.is_empty());
    }

    #[test]
    fn cancels_flow_through_reverse_arc() {
        // the first path 0-1-2-3 must be partly undone to reach value 2
        let arcs = [(0, 1, 1), (0, 2, 1), (1, 2, 1), (1, 3, 1), (2, 3, 1)];
        for model in [Model::Adjacency, Model::List] {
            let net = network(4, &arcs, model, 1);
            let (flow, _) = max_flow_with(&net, &OracleConfig::with_seed(3), true).unwrap();
            assert_eq!(flow.value(), 2);
            flow.validate(&net).unwrap();
        }
    }

    #[test]
    fn antiparallel_pair_aggregates() {
        let net = network(3, &[(0, 1, 2), (1, 0, 1), (1, 2, 2)], Model::Adjacency, 2);
        let mut view = ResidualView::new(&net, IntegerFlow::zero(&net));
        assert_eq!(view.residual(ArcRef::Pair { from: 0, to: 1 }), 2);
        view.augment(&[ArcRef::Pair { from: 1, to: 0 }], 1).unwrap();
        // pushing 1 -> 0 used the (1,0) arc
        assert_eq!(view.residual(ArcRef::Pair { from: 0, to: 1 }), 3);
        view.augment(&[ArcRef::Pair { from: 0, to: 1 }], 1).unwrap();
        assert_eq!(view.flow().arcs(), &[0, 0, 0]);
    }

    #[test]
    fn list_slots_cover_in_arcs() {
        let net = network(3, &[(0, 1, 2), (1, 2, 2)], Model::List, 2);
        let mut view = ResidualView::new(&net, IntegerFlow::zero(&net));
        assert_eq!(view.domain_len(1), 2);
        assert_eq!(view.entry(1, 1), Some((0, ArcRef::Backward(0), 0)));
        view.augment(&[ArcRef::Forward(0)], 2).unwrap();
        assert_eq!(view.residual_neighbors(1), vec![(2, 2), (0, 2)]);
        assert_eq!(view.residual_neighbors(0), vec![]);
    }
}
