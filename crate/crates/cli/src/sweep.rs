//! Scaling sweeps over a grid of sizes, and log-log slope fits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::Context;
use qgraph_core::graph::io::Instance;
use qgraph_core::quantum::parse_rational;
use qgraph_core::{Amplification, Model};
use rayon::prelude::*;
use serde::Serialize;

use crate::instance::{Algo, GenSpec};
use crate::run::{config_hash, run_once, with_model, InputError, RunConfig, RunRecord};

/// How the edge count grows with `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Density {
    /// Constant edge probability.
    Probability(f64),
    /// `m = c * n`.
    Linear(f64),
    /// `m = n^e`.
    Power(f64),
}

impl Density {
    /// Exponent `alpha` with `m ~ n^alpha`.
    pub fn alpha(self) -> f64 {
        match self {
            Density::Probability(_) => 2.0,
            Density::Linear(_) => 1.0,
            Density::Power(e) => e,
        }
    }

    fn edges(self, n: usize, pairs: usize) -> usize {
        let m = match self {
            Density::Probability(p) => p * pairs as f64,
            Density::Linear(c) => c * n as f64,
            Density::Power(e) => (n as f64).powf(e),
        };
        (m.round() as usize).min(pairs)
    }

    fn probability(self, n: usize, pairs: usize) -> f64 {
        match self {
            Density::Probability(p) => p,
            _ => (self.edges(n, pairs) as f64 / pairs as f64).clamp(f64::MIN_POSITIVE, 1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    #[serde(serialize_with = "display")]
    pub algo: Algo,
    #[serde(serialize_with = "display")]
    pub model: Model,
    /// Instance family; `None` picks the algorithm's default random family.
    pub family: Option<String>,
    pub sizes: Vec<usize>,
    pub density: Density,
    pub bound: u64,
    pub seeds: u64,
    pub base_seed: u64,
    #[serde(serialize_with = "display")]
    pub amplification: Amplification,
    pub verify: bool,
    #[serde(skip)]
    pub jobs: usize,
}

fn display<T: fmt::Display, S: serde::Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

fn input(line: usize, message: impl fmt::Display) -> anyhow::Error {
    InputError(format!("line {line}: {message}")).into()
}

impl SweepSpec {
    /// Parses flat `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut keys: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| input(i + 1, "expected `key = value`"))?;
            let key = key.trim().to_string();
            if keys
                .insert(key.clone(), (i + 1, value.trim().to_string()))
                .is_some()
            {
                return Err(input(i + 1, format!("duplicate key `{key}`")));
            }
        }
        let mut take = |key: &str| keys.remove(key);
        fn parse<T: std::str::FromStr>(entry: (usize, String), key: &str) -> anyhow::Result<T> {
            entry
                .1
                .parse()
                .map_err(|_| input(entry.0, format!("invalid value `{}` for `{key}`", entry.1)))
        }
        let algo = parse(
            take("algo").ok_or_else(|| input(0, "missing `algo`"))?,
            "algo",
        )?;
        let model = take("model")
            .map(|e| parse(e, "model"))
            .transpose()?
            .unwrap_or(Model::List);
        let family = take("family").map(|e| e.1);
        let (size_line, sizes_raw) = take("sizes").ok_or_else(|| input(0, "missing `sizes`"))?;
        let sizes = sizes_raw
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| input(size_line, "sizes must be comma-separated integers"))?;
        let density = match (take("density"), take("m_per_n"), take("m_exponent")) {
            (Some(p), None, None) => Density::Probability(parse(p, "density")?),
            (None, Some(c), None) => Density::Linear(parse(c, "m_per_n")?),
            (None, None, Some(e)) => Density::Power(parse(e, "m_exponent")?),
            (None, None, None) => Density::Probability(0.5),
            _ => {
                return Err(input(
                    0,
                    "give at most one of `density`, `m_per_n`, `m_exponent`",
                ))
            }
        };
        let bound = take("bound")
            .map(|e| parse(e, "bound"))
            .transpose()?
            .unwrap_or(1);
        let seeds = take("seeds")
            .map(|e| parse(e, "seeds"))
            .transpose()?
            .unwrap_or(3);
        let base_seed = take("seed")
            .map(|e| parse(e, "seed"))
            .transpose()?
            .unwrap_or(0);
        let amplification = take("amp")
            .map(|e| parse(e, "amp"))
            .transpose()?
            .unwrap_or(Amplification::LogN);
        let verify = take("verify")
            .map(|e| parse(e, "verify"))
            .transpose()?
            .unwrap_or(true);
        let jobs = take("jobs")
            .map(|e| parse(e, "jobs"))
            .transpose()?
            .unwrap_or(0);
        if let Some((key, (line, _))) = keys.into_iter().next() {
            return Err(input(line, format!("unknown key `{key}`")));
        }
        let spec = SweepSpec {
            algo,
            model,
            family,
            sizes,
            density,
            bound,
            seeds,
            base_seed,
            amplification,
            verify,
            jobs,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> anyhow::Result<()> {
        if self.sizes.len() < 3 {
            return Err(InputError("a sweep needs at least 3 sizes".into()).into());
        }
        if self.seeds == 0 {
            return Err(InputError("seeds must be >= 1".into()).into());
        }
        let families: &[&str] = match self.algo {
            Algo::Layers => &["digraph"],
            Algo::Bipartite => &["random", "half"],
            Algo::General => &["gnp"],
            Algo::Flow => &["network", "majority"],
        };
        if let Some(f) = &self.family {
            if !families.contains(&f.as_str()) {
                return Err(
                    InputError(format!("family `{f}` not available for {}", self.algo)).into(),
                );
            }
        }
        Ok(())
    }

    pub fn id(&self) -> String {
        config_hash(&serde_json::to_string(self).expect("spec serializes"))
    }

    /// Generator call for size `n`.
    pub fn gen_spec(&self, n: usize) -> GenSpec {
        let family = self.family.as_deref();
        match self.algo {
            Algo::Layers => {
                let m = self.density.edges(n, n * (n - 1)).max(n - 1);
                GenSpec::Digraph { n, m }
            }
            Algo::Bipartite if family == Some("half") => GenSpec::Half(n / 2),
            Algo::Bipartite => {
                let (n1, n2) = (n / 2, n - n / 2);
                GenSpec::Bipartite {
                    n1,
                    n2,
                    p: self.density.probability(n, n1 * n2),
                }
            }
            Algo::General => GenSpec::Gnp {
                n,
                p: self.density.probability(n, n * (n - 1) / 2),
            },
            Algo::Flow if family == Some("majority") => GenSpec::Majority {
                p: n.saturating_sub(2) / 2,
                extra: 0,
            },
            Algo::Flow => GenSpec::Network {
                n,
                m: self.density.edges(n, n * (n - 1)).max(n - 1),
                bound: self.bound,
            },
        }
    }

    /// Density exponent of the instances actually generated.
    pub fn alpha(&self) -> f64 {
        match (self.algo, self.family.as_deref()) {
            (Algo::Bipartite, Some("half")) | (Algo::Flow, Some("majority")) => 2.0,
            _ => self.density.alpha(),
        }
    }

    pub fn predicted_slope(&self) -> f64 {
        predicted_slope(self.algo, self.model, self.alpha())
    }
}

/// Exponent of `n` in the running-time bound, ignoring log factors, for
/// `m ~ n^alpha`.
pub fn predicted_slope(algo: Algo, model: Model, alpha: f64) -> f64 {
    match (algo, model) {
        (Algo::Layers, Model::Adjacency) => 1.5,
        (Algo::Layers, Model::List) => (1.0 + alpha) / 2.0,
        (Algo::Bipartite, Model::Adjacency) => 2.0,
        (Algo::Bipartite, Model::List) => 1.0 + alpha.max(1.0) / 2.0,
        (Algo::General, Model::Adjacency) => 2.5,
        (Algo::General, Model::List) => (1.5 + alpha / 2.0).max(2.0),
        (Algo::Flow, Model::Adjacency) => 13.0 / 6.0,
        (Algo::Flow, Model::List) => (7.0 / 6.0 + alpha / 2.0).min(0.5 + alpha),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitPoint {
    pub n: usize,
    pub median_charged: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
    pub predicted: f64,
    pub points: Vec<FitPoint>,
}

impl FitResult {
    /// `median / (n^predicted * log2 n)` per grid point.
    pub fn ratios(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| {
                let n = p.n as f64;
                p.median_charged / (n.powf(self.predicted) * n.log2())
            })
            .collect()
    }

    /// No ratio exceeds `factor` times any earlier ratio.
    pub fn ratios_non_increasing_within(&self, factor: f64) -> bool {
        let r = self.ratios();
        (0..r.len()).all(|i| r[i + 1..].iter().all(|&later| later <= factor * r[i]))
    }

    pub fn slope_within(&self, band: f64) -> bool {
        (self.slope - self.predicted).abs() <= band
    }
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

/// Least-squares fit of `ln(median charged)` against `ln n`.
pub fn fit(records: &[RunRecord], predicted: f64) -> anyhow::Result<FitResult> {
    let mut by_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        let q = parse_rational(&r.charged_queries)?;
        by_n.entry(r.n)
            .or_default()
            .push(*q.numer() as f64 / *q.denom() as f64);
    }
    let points: Vec<FitPoint> = by_n
        .into_iter()
        .map(|(n, mut v)| FitPoint {
            n,
            median_charged: median(&mut v),
        })
        .collect();
    anyhow::ensure!(points.len() >= 2, "need at least two sizes to fit a slope");
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| ((p.n as f64).ln(), p.median_charged.ln()))
        .collect();
    let k = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(FitResult {
        slope,
        intercept,
        residual,
        predicted,
        points,
    })
}

/// A run whose checks failed during a sweep or a verified run (exit status 2).
#[derive(Debug)]
pub struct VerificationError(pub String);

impl fmt::Display for VerificationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for VerificationError {}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub sweep_id: String,
    pub spec: SweepSpec,
    pub fit: FitResult,
    #[serde(skip)]
    pub records: Vec<RunRecord>,
}

/// Runs every (size, seed) point, rows ordered by size then seed.
pub fn run_sweep(spec: &SweepSpec) -> anyhow::Result<SweepResult> {
    let sweep_id = spec.id();
    let points: Vec<(usize, u64)> = spec
        .sizes
        .iter()
        .flat_map(|&n| (0..spec.seeds).map(move |i| (n, spec.base_seed + i)))
        .collect();
    let one = |&(n, seed): &(usize, u64)| -> anyhow::Result<RunRecord> {
        let gen = spec.gen_spec(n);
        let instance: Instance = gen
            .build(seed)
            .with_context(|| format!("generating {gen}"))?;
        let instance = with_model(&instance, spec.model);
        let cfg = RunConfig {
            algo: spec.algo,
            seed,
            amplification: spec.amplification,
            verify: spec.verify,
        };
        let outcome = run_once(&instance, &cfg, &sweep_id)?;
        if spec.verify && !outcome.passed() {
            return Err(VerificationError(format!(
                "{gen} seed {seed}: failed {}",
                outcome.failed_checks().join(", ")
            ))
            .into());
        }
        Ok(outcome.record)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.jobs)
        .build()?;
    let mut records = pool.install(|| {
        points
            .par_iter()
            .map(one)
            .collect::<anyhow::Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| (r.n, r.seed));
    let fit = fit(&records, spec.predicted_slope())?;
    Ok(SweepResult {
        sweep_id,
        spec: spec.clone(),
        fit,
        records,
    })
}

/// Writes `runs.csv` and `fit.json` into `dir`.
pub fn write_sweep(result: &SweepResult, dir: &Path) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let csv = std::fs::File::create(dir.join("runs.csv"))?;
    crate::run::write_csv(csv, &result.records)?;
    let json = serde_json::to_string_pretty(result)?;
    std::fs::write(dir.join("fit.json"), json + "\n")?;
    Ok(())
}
