//! Algorithm names and generated-instance specs (`--gen`).

use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use qgraph_core::graph::generate;
use qgraph_core::graph::io::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Algo {
    Layers,
    Bipartite,
    General,
    Flow,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Layers => "layers",
            Algo::Bipartite => "bipartite",
            Algo::General => "general",
            Algo::Flow => "flow",
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        Ok(match s {
            "layers" => Algo::Layers,
            "bipartite" => Algo::Bipartite,
            "general" => Algo::General,
            "flow" => Algo::Flow,
            other => bail!("unknown algorithm `{other}`"),
        })
    }
}

/// A generator call such as `k33`, `gnp:40,0.2` or `network:20,60,3`.
///
/// Random families take their seed from `--seed`.
#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    K33,
    Petersen,
    Complete(usize),
    CompleteBipartite(usize, usize),
    Path(usize),
    Cycle(usize),
    Star(usize),
    Half(usize),
    Bipartite { n1: usize, n2: usize, p: f64 },
    Gnp { n: usize, p: f64 },
    Digraph { n: usize, m: usize },
    Network { n: usize, m: usize, bound: u64 },
    Majority { p: usize, extra: usize },
}

fn split<'a>(raw: &'a str, count: usize, name: &str) -> anyhow::Result<Vec<&'a str>> {
    let parts: Vec<&str> = if raw.is_empty() {
        Vec::new()
    } else {
        raw.split(',').map(str::trim).collect()
    };
    if parts.len() != count {
        bail!("`{name}` takes {count} argument(s), got {}", parts.len());
    }
    Ok(parts)
}

fn num<T: FromStr>(raw: &str, name: &str) -> anyhow::Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    raw.parse()
        .with_context(|| format!("bad argument `{raw}` for `{name}`"))
}

impl FromStr for GenSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let a = |count| split(rest, count, name);
        let spec = match name {
            "k33" => GenSpec::K33,
            "petersen" => GenSpec::Petersen,
            "complete" => GenSpec::Complete(num(a(1)?[0], name)?),
            "kab" => {
                let v = a(2)?;
                GenSpec::CompleteBipartite(num(v[0], name)?, num(v[1], name)?)
            }
            "path" => GenSpec::Path(num(a(1)?[0], name)?),
            "cycle" => GenSpec::Cycle(num(a(1)?[0], name)?),
            "star" => GenSpec::Star(num(a(1)?[0], name)?),
            "half" => GenSpec::Half(num(a(1)?[0], name)?),
            "bipartite" => {
                let v = a(3)?;
                GenSpec::Bipartite {
                    n1: num(v[0], name)?,
                    n2: num(v[1], name)?,
                    p: num(v[2], name)?,
                }
            }
            "gnp" => {
                let v = a(2)?;
                GenSpec::Gnp {
                    n: num(v[0], name)?,
                    p: num(v[1], name)?,
                }
            }
            "digraph" => {
                let v = a(2)?;
                GenSpec::Digraph {
                    n: num(v[0], name)?,
                    m: num(v[1], name)?,
                }
            }
            "network" => {
                let v = a(3)?;
                GenSpec::Network {
                    n: num(v[0], name)?,
                    m: num(v[1], name)?,
                    bound: num(v[2], name)?,
                }
            }
            "majority" => {
                let v = a(2)?;
                GenSpec::Majority {
                    p: num(v[0], name)?,
                    extra: num(v[1], name)?,
                }
            }
            other => bail!("unknown generator `{other}`"),
        };
        Ok(spec)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenSpec::K33 => write!(f, "k33"),
            GenSpec::Petersen => write!(f, "petersen"),
            GenSpec::Complete(n) => write!(f, "complete:{n}"),
            GenSpec::CompleteBipartite(a, b) => write!(f, "kab:{a},{b}"),
            GenSpec::Path(n) => write!(f, "path:{n}"),
            GenSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GenSpec::Star(n) => write!(f, "star:{n}"),
            GenSpec::Half(h) => write!(f, "half:{h}"),
            GenSpec::Bipartite { n1, n2, p } => write!(f, "bipartite:{n1},{n2},{p}"),
            GenSpec::Gnp { n, p } => write!(f, "gnp:{n},{p}"),
            GenSpec::Digraph { n, m } => write!(f, "digraph:{n},{m}"),
            GenSpec::Network { n, m, bound } => write!(f, "network:{n},{m},{bound}"),
            GenSpec::Majority { p, extra } => write!(f, "majority:{p},{extra}"),
        }
    }
}

impl GenSpec {
    pub fn build(&self, seed: u64) -> qgraph_core::Result<Instance> {
        use Instance::{Graph, Network};
        Ok(match *self {
            GenSpec::K33 => Graph(generate::complete_bipartite(3, 3)?),
            GenSpec::Petersen => Graph(generate::petersen()),
            GenSpec::Complete(n) => Graph(generate::complete(n)?),
            GenSpec::CompleteBipartite(a, b) => Graph(generate::complete_bipartite(a, b)?),
            GenSpec::Path(n) => Graph(generate::path(n)?),
            GenSpec::Cycle(n) => Graph(generate::cycle(n)?),
            GenSpec::Star(n) => Graph(generate::star(n)?),
            GenSpec::Half(h) => Graph(generate::half_graph(h)?),
            GenSpec::Bipartite { n1, n2, p } => Graph(generate::random_bipartite(n1, n2, p, seed)?),
            GenSpec::Gnp { n, p } => Graph(generate::random_graph(n, p, seed)?),
            GenSpec::Digraph { n, m } => Graph(generate::random_digraph(n, m, seed)?),
            GenSpec::Network { n, m, bound } => {
                Network(generate::random_network(n, m, bound, seed)?)
            }
            GenSpec::Majority { p, extra } => {
                Network(generate::majority_hard_instance(p, extra, seed)?)
            }
        })
    }
}
