//! One algorithm run on one instance, with optional oracle verification.

use std::fmt;

use qgraph_core::baselines::{
    bfs_layers, bipartite_matching_via_flow, brute_force_max_matching, count_augmenting_for_first,
    decompose_symmetric_difference, edmonds_karp, EXHAUSTIVE_LIMIT,
};
use qgraph_core::bipartite::iteration_bound;
use qgraph_core::flow::{depth_monotone, max_flow_with, phase_count_check, residual_bound_check};
use qgraph_core::graph::io::Instance;
use qgraph_core::quantum::format_rational;
use qgraph_core::{
    assign_layers, max_bipartite_matching, max_general_matching, Amplification, BlackBoxGraph,
    LedgerSnapshot, Model, OracleConfig, Searcher,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::instance::Algo;

/// Instance/algorithm mismatch or unusable input (exit status 3).
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// Flow runs record the per-search degree check up to this many vertices.
pub const DEGREE_CHECK_LIMIT: usize = 64;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algo: Algo,
    pub seed: u64,
    pub amplification: Amplification,
    pub verify: bool,
}

impl RunConfig {
    pub fn oracle_config(&self) -> OracleConfig {
        OracleConfig::with_seed(self.seed).amplified(self.amplification)
    }
}

/// One CSV row. Column order is part of the output format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub sweep_id: String,
    pub algo: String,
    pub model: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "U")]
    pub bound: Option<u64>,
    pub seed: u64,
    pub answer: i64,
    pub oracle: Option<i64>,
    pub charged_queries: String,
    pub raw_probes: u64,
    pub phases: usize,
    pub max_depth: usize,
    pub verdicts: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub record: RunRecord,
    pub checks: Vec<Check>,
    pub ledger: LedgerSnapshot,
    /// Algorithm-specific report.
    pub detail: serde_json::Value,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name)
            .collect()
    }
}

pub fn format_verdicts(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| format!("{}={}", c.name, if c.pass { "pass" } else { "fail" }))
        .collect::<Vec<_>>()
        .join(";")
}

/// First 16 hex digits of the SHA-256 of `text`.
pub fn config_hash(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn with_model(instance: &Instance, model: Model) -> Instance {
    match instance {
        Instance::Graph(g) => Instance::Graph(g.to_model(model)),
        Instance::Network(net) => Instance::Network(net.to_model(model)),
    }
}

fn model_of(instance: &Instance) -> Model {
    match instance {
        Instance::Graph(g) => g.model(),
        Instance::Network(net) => net.model(),
    }
}

struct Partial {
    answer: i64,
    oracle: Option<i64>,
    phases: usize,
    max_depth: usize,
    checks: Vec<Check>,
    ledger: LedgerSnapshot,
    detail: serde_json::Value,
}

fn check(name: &'static str, pass: bool) -> Check {
    Check { name, pass }
}

fn oracle_check(checks: &mut Vec<Check>, answer: i64, oracle: Option<i64>) {
    if let Some(o) = oracle {
        checks.push(check("oracle", o == answer));
    }
}

fn undirected(g: &BlackBoxGraph) -> anyhow::Result<()> {
    if g.is_directed() {
        return Err(InputError("matching needs an undirected graph".into()).into());
    }
    Ok(())
}

fn json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).unwrap_or(serde_json::Value::Null)
}

fn run_layers(g: &BlackBoxGraph, start: usize, cfg: &RunConfig) -> Partial {
    let searcher = Searcher::new(&cfg.oracle_config(), g.n());
    let la = assign_layers(g, start, &searcher);
    let mut checks = vec![check(
        "one_parent",
        la.per_vertex_found.iter().sum::<usize>() + 1 == la.reached(),
    )];
    let mut oracle = None;
    if cfg.verify {
        let expected = bfs_layers(g, start);
        oracle = Some(expected.iter().flatten().count() as i64);
        checks.push(check("bfs", expected == la.layer));
    }
    let answer = la.reached() as i64;
    oracle_check(&mut checks, answer, oracle);
    Partial {
        answer,
        oracle,
        phases: 1,
        max_depth: la.depth(),
        checks,
        ledger: searcher.ledger().snapshot(),
        detail: json(&la),
    }
}

fn matching_oracle(g: &BlackBoxGraph, bipartite: bool) -> anyhow::Result<i64> {
    if g.n() <= EXHAUSTIVE_LIMIT {
        return Ok(brute_force_max_matching(g)?.value);
    }
    if bipartite {
        return Ok(bipartite_matching_via_flow(g)?.value);
    }
    let pg = petgraph::graph::UnGraph::<(), ()>::from_edges(
        g.edges().iter().map(|&(u, v)| (u as u32, v as u32)),
    );
    Ok(petgraph::algo::maximum_matching(&pg).len() as i64)
}

fn run_bipartite(g: &BlackBoxGraph, cfg: &RunConfig) -> anyhow::Result<Partial> {
    undirected(g)?;
    let (m, report) = match max_bipartite_matching(g, &cfg.oracle_config()) {
        Err(e @ qgraph_core::Error::NotBipartite(..)) => {
            return Err(InputError(e.to_string()).into())
        }
        other => other?,
    };
    let lengths = report.path_lengths();
    let mut disjoint_ok = true;
    for earlier in &report.intermediate {
        let parts = decompose_symmetric_difference(earlier, &m)?;
        disjoint_ok &= count_augmenting_for_first(&parts) >= m.size() - earlier.size();
    }
    let mut checks = vec![
        check("valid", m.validate(g).is_ok()),
        check(
            "iteration_bound",
            report.iterations.len() <= iteration_bound(g.n()),
        ),
        check("lengths_increase", lengths.windows(2).all(|w| w[0] < w[1])),
        check("disjoint_paths", disjoint_ok),
    ];
    let answer = m.size() as i64;
    let oracle = if cfg.verify {
        Some(matching_oracle(g, true)?)
    } else {
        None
    };
    oracle_check(&mut checks, answer, oracle);
    Ok(Partial {
        answer,
        oracle,
        phases: report.iterations.len(),
        max_depth: lengths.iter().copied().max().unwrap_or(0),
        checks,
        ledger: report.ledger.clone(),
        detail: json(&report),
    })
}

fn run_general(g: &BlackBoxGraph, cfg: &RunConfig) -> anyhow::Result<Partial> {
    undirected(g)?;
    let (m, report) = max_general_matching(g, &cfg.oracle_config())?;
    let mut starts: Vec<usize> = report.phases.iter().map(|p| p.start).collect();
    starts.sort_unstable();
    starts.dedup();
    let counters_ok = report.phases.iter().all(|p| {
        let f = p.even_count;
        p.counters.labeled <= f && p.counters.bridges <= f && p.counters.collapsed <= f
    });
    let mut checks = vec![
        check("valid", m.validate(g).is_ok()),
        check(
            "starts_unique",
            starts.len() == report.phases.len() && starts.len() <= g.n(),
        ),
        check("counters", counters_ok),
        check(
            "insertions",
            report
                .phases
                .iter()
                .all(|p| p.counters.insertions <= 2 * p.even_count),
        ),
    ];
    let answer = m.size() as i64;
    let oracle = if cfg.verify {
        Some(matching_oracle(g, false)?)
    } else {
        None
    };
    oracle_check(&mut checks, answer, oracle);
    Ok(Partial {
        answer,
        oracle,
        phases: report.phases.len(),
        max_depth: report
            .phases
            .iter()
            .filter_map(|p| p.path_edges)
            .max()
            .unwrap_or(0),
        checks,
        ledger: report.ledger.clone(),
        detail: json(&report),
    })
}

fn run_flow(net: &qgraph_core::IntegerNetwork, cfg: &RunConfig) -> anyhow::Result<Partial> {
    let degrees = net.n() <= DEGREE_CHECK_LIMIT;
    let (flow, report) = max_flow_with(net, &cfg.oracle_config(), degrees)?;
    let answer = flow.value();
    let oracle = cfg.verify.then(|| edmonds_karp(net).value);
    let true_max = oracle.unwrap_or(answer);
    let (blocking_ok, single_ok) = phase_count_check(net, &report);
    let n = net.n() as u64;
    let accounting = report.phases.iter().all(|p| {
        p.layer_sums().iter().all(|&s| s <= p.paths)
            && p.a.iter().sum::<u64>() <= p.depth as u64 * p.paths
            && p.c.iter().sum::<u64>() <= n
    });
    let mut checks = vec![
        check("valid", flow.validate(net).is_ok()),
        check(
            "residual_bound",
            residual_bound_check(net, &report, true_max)
                .into_iter()
                .all(|ok| ok),
        ),
        check("blocking_phases", blocking_ok),
        check("single_phases", single_ok),
        check("depth_monotone", depth_monotone(&report)),
        check("accounting", accounting),
    ];
    if degrees {
        checks.push(check(
            "degree_bound",
            report.phases.iter().all(|p| p.degree_violations == 0),
        ));
    }
    oracle_check(&mut checks, answer, oracle);
    Ok(Partial {
        answer,
        oracle,
        phases: report.phases.len(),
        max_depth: report.phases.iter().map(|p| p.depth).max().unwrap_or(0),
        checks,
        ledger: report.ledger.clone(),
        detail: json(&report),
    })
}

/// Runs `cfg.algo` on `instance` in the instance's own model.
pub fn run_once(
    instance: &Instance,
    cfg: &RunConfig,
    sweep_id: &str,
) -> anyhow::Result<RunOutcome> {
    let partial = match (cfg.algo, instance) {
        (Algo::Layers, Instance::Graph(g)) => run_layers(g, 0, cfg),
        (Algo::Layers, Instance::Network(net)) => run_layers(net.graph(), net.source(), cfg),
        (Algo::Bipartite, Instance::Graph(g)) => run_bipartite(g, cfg)?,
        (Algo::General, Instance::Graph(g)) => run_general(g, cfg)?,
        (Algo::Flow, Instance::Network(net)) => run_flow(net, cfg)?,
        (algo, Instance::Network(_)) => {
            return Err(
                InputError(format!("`{algo}` needs a graph instance, got a network")).into(),
            )
        }
        (algo, Instance::Graph(_)) => {
            return Err(
                InputError(format!("`{algo}` needs a network instance, got a graph")).into(),
            )
        }
    };
    let (n, m, bound) = match instance {
        Instance::Graph(g) => (g.n(), g.m(), None),
        Instance::Network(net) => (net.n(), net.m(), Some(net.bound())),
    };
    let record = RunRecord {
        sweep_id: sweep_id.to_string(),
        algo: cfg.algo.to_string(),
        model: model_of(instance).to_string(),
        n,
        m,
        bound,
        seed: cfg.seed,
        answer: partial.answer,
        oracle: partial.oracle,
        charged_queries: format_rational(&partial.ledger.charged_queries),
        raw_probes: partial.ledger.raw_probes,
        phases: partial.phases,
        max_depth: partial.max_depth,
        verdicts: format_verdicts(&partial.checks),
    };
    Ok(RunOutcome {
        record,
        checks: partial.checks,
        ledger: partial.ledger,
        detail: partial.detail,
    })
}

/// Writes records as CSV with a header row.
pub fn write_csv<W: std::io::Write>(out: W, records: &[RunRecord]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: std::io::Read>(input: R) -> anyhow::Result<Vec<RunRecord>> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<_, _>>()?)
}
