//! Plain-text instance files.
//!
//! ```text
//! G <n> <m> <directed:0|1>      N <n> <m> <source> <sink> <U>
//! <u> <v>                       <u> <v> <cap>
//! ...                           ...
//! ```
//!
//! Vertices are 0-based, `#` starts a comment, fields are whitespace
//! separated.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{BlackBoxGraph, IntegerNetwork, Model};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Graph(BlackBoxGraph),
    Network(IntegerNetwork),
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            inner: text.lines().enumerate(),
        }
    }

    // next non-empty line with comments stripped, as (1-based line no, fields)
    fn next_fields(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, raw) in self.inner.by_ref() {
            let body = raw.split('#').next().unwrap_or("");
            let fields: Vec<&str> = body.split_whitespace().collect();
            if !fields.is_empty() {
                return Some((i + 1, fields));
            }
        }
        None
    }
}

fn field<T: std::str::FromStr>(fields: &[&str], idx: usize, line: usize, what: &str) -> Result<T> {
    let raw = fields
        .get(idx)
        .ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{raw}`")))
}

fn expect_len(fields: &[&str], len: usize, line: usize) -> Result<()> {
    if fields.len() == len {
        Ok(())
    } else {
        Err(Error::parse(
            line,
            format!("expected {len} fields, found {}", fields.len()),
        ))
    }
}

// edges, capacities (empty without `with_cap`), and the source line of each edge
type EdgeRows = (Vec<(usize, usize)>, Vec<u64>, Vec<usize>);

fn read_edges(
    lines: &mut Lines<'_>,
    m: usize,
    n: usize,
    with_cap: bool,
    header_line: usize,
) -> Result<EdgeRows> {
    let mut edges = Vec::with_capacity(m);
    let mut caps = Vec::new();
    let mut line_of = Vec::with_capacity(m);
    while edges.len() < m {
        let (line, fields) = lines.next_fields().ok_or_else(|| {
            Error::parse(
                header_line,
                format!("header declares {m} edges, file has {}", edges.len()),
            )
        })?;
        expect_len(&fields, if with_cap { 3 } else { 2 }, line)?;
        let u: usize = field(&fields, 0, line, "vertex")?;
        let v: usize = field(&fields, 1, line, "vertex")?;
        for x in [u, v] {
            if x >= n {
                return Err(Error::parse(
                    line,
                    format!("vertex {x} out of range (n = {n})"),
                ));
            }
        }
        if u == v {
            return Err(Error::parse(line, format!("self-loop at {u}")));
        }
        if with_cap {
            let c: u64 = field(&fields, 2, line, "capacity")?;
            if c == 0 {
                return Err(Error::parse(line, "capacity must be >= 1"));
            }
            caps.push(c);
        }
        edges.push((u, v));
        line_of.push(line);
    }
    if let Some((line, _)) = lines.next_fields() {
        return Err(Error::parse(
            line,
            format!("more than the declared {m} edges"),
        ));
    }
    Ok((edges, caps, line_of))
}

// Attach a line number to construction errors that refer to a specific edge.
fn located(err: Error, edges: &[(usize, usize)], line_of: &[usize], header_line: usize) -> Error {
    let find = |u: usize, v: usize| {
        edges
            .iter()
            .rposition(|&e| e == (u, v))
            .map_or(header_line, |i| line_of[i])
    };
    match err {
        Error::ParallelEdge(u, v) => Error::parse(find(u, v), format!("duplicate edge ({u}, {v})")),
        Error::InvalidCapacity {
            from,
            to,
            capacity,
            bound,
        } => Error::parse(
            find(from, to),
            format!("capacity {capacity} exceeds bound U = {bound}"),
        ),
        Error::Parse { .. } => err,
        other => Error::parse(header_line, other.to_string()),
    }
}

fn parse_graph_body(
    lines: &mut Lines<'_>,
    line: usize,
    fields: &[&str],
    model: Model,
) -> Result<BlackBoxGraph> {
    expect_len(fields, 4, line)?;
    let n: usize = field(fields, 1, line, "n")?;
    let m: usize = field(fields, 2, line, "m")?;
    let directed = match fields[3] {
        "0" => false,
        "1" => true,
        other => {
            return Err(Error::parse(
                line,
                format!("directed flag must be 0 or 1, got `{other}`"),
            ))
        }
    };
    if n == 0 {
        return Err(Error::parse(line, "n must be >= 1"));
    }
    if m == 0 {
        return Err(Error::parse(line, "m must be >= 1"));
    }
    let (edges, _, line_of) = read_edges(lines, m, n, false, line)?;
    BlackBoxGraph::new(n, edges.clone(), directed, model)
        .map_err(|e| located(e, &edges, &line_of, line))
}

fn parse_network_body(
    lines: &mut Lines<'_>,
    line: usize,
    fields: &[&str],
    model: Model,
) -> Result<IntegerNetwork> {
    expect_len(fields, 6, line)?;
    let n: usize = field(fields, 1, line, "n")?;
    let m: usize = field(fields, 2, line, "m")?;
    let source: usize = field(fields, 3, line, "source")?;
    let sink: usize = field(fields, 4, line, "sink")?;
    let bound: u64 = field(fields, 5, line, "U")?;
    if n == 0 {
        return Err(Error::parse(line, "n must be >= 1"));
    }
    if m == 0 {
        return Err(Error::parse(line, "m must be >= 1"));
    }
    if bound == 0 {
        return Err(Error::parse(line, "U must be >= 1"));
    }
    let (edges, caps, line_of) = read_edges(lines, m, n, true, line)?;
    let g = BlackBoxGraph::new(n, edges.clone(), true, model)
        .map_err(|e| located(e, &edges, &line_of, line))?;
    IntegerNetwork::new(g, caps, source, sink, bound)
        .map_err(|e| located(e, &edges, &line_of, line))
}

pub fn parse_instance(text: &str, model: Model) -> Result<Instance> {
    let mut lines = Lines::new(text);
    let (line, fields) = lines
        .next_fields()
        .ok_or_else(|| Error::parse(1, "empty file"))?;
    match fields[0] {
        "G" => parse_graph_body(&mut lines, line, &fields, model).map(Instance::Graph),
        "N" => parse_network_body(&mut lines, line, &fields, model).map(Instance::Network),
        other => Err(Error::parse(
            line,
            format!("unknown header `{other}`, expected G or N"),
        )),
    }
}

pub fn parse_graph(text: &str, model: Model) -> Result<BlackBoxGraph> {
    match parse_instance(text, model)? {
        Instance::Graph(g) => Ok(g),
        Instance::Network(_) => Err(Error::parse(
            1,
            "expected a graph (G) file, found a network",
        )),
    }
}

pub fn parse_network(text: &str, model: Model) -> Result<IntegerNetwork> {
    match parse_instance(text, model)? {
        Instance::Network(net) => Ok(net),
        Instance::Graph(_) => Err(Error::parse(
            1,
            "expected a network (N) file, found a graph",
        )),
    }
}

pub fn format_graph(g: &BlackBoxGraph) -> String {
    let mut out = format!("G {} {} {}\n", g.n(), g.m(), u8::from(g.is_directed()));
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn format_network(net: &IntegerNetwork) -> String {
    let mut out = format!(
        "N {} {} {} {} {}\n",
        net.n(),
        net.m(),
        net.source(),
        net.sink(),
        net.bound()
    );
    for (arc, &(u, v)) in net.graph().edges().iter().enumerate() {
        writeln!(out, "{u} {v} {}", net.capacity(arc)).unwrap();
    }
    out
}

pub fn read_instance(path: impl AsRef<Path>, model: Model) -> Result<Instance> {
    parse_instance(&fs::read_to_string(path)?, model)
}

pub fn read_graph(path: impl AsRef<Path>, model: Model) -> Result<BlackBoxGraph> {
    parse_graph(&fs::read_to_string(path)?, model)
}

pub fn read_network(path: impl AsRef<Path>, model: Model) -> Result<IntegerNetwork> {
    parse_network(&fs::read_to_string(path)?, model)
}

pub fn write_graph(path: impl AsRef<Path>, g: &BlackBoxGraph) -> Result<()> {
    fs::write(path, format_graph(g))?;
    Ok(())
}

pub fn write_network(path: impl AsRef<Path>, net: &IntegerNetwork) -> Result<()> {
    fs::write(path, format_network(net))?;
    Ok(())
}
