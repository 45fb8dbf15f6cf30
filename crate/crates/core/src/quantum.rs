//! Classical emulation of the two quantum subroutines with a query ledger.
//!
//! Searches are answered by an exhaustive classical scan of the domain (each
//! predicate evaluation is real classical work and shows up in the probe
//! counter), while the ledger is charged what the quantum subroutine would
//! cost:
//!
//! | primitive                   | charge (units)                    |
//! |-----------------------------|-----------------------------------|
//! | find all `k` of `l`         | `ceil(sqrt(k*l))` + `ceil(sqrt(l))` |
//! | find one of `k` of `l`      | `ceil(sqrt(l/k))`, or `ceil(sqrt(l))` if `k = 0` |
//! | count ones in `n` bits      | `ceil(sqrt(n))`                    |
//!
//! The charged total is `cost_constant * units * amplification`, where the
//! amplification is `ceil(log2(n + 2))` for a graph on `n` vertices in
//! [`Amplification::LogN`] mode and 1 otherwise.

use std::cell::{Cell, RefCell};
use std::fmt;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ProbeCounter;

pub type Rational = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Amplification {
    #[default]
    None,
    LogN,
}

impl std::str::FromStr for Amplification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Amplification::None),
            "logn" => Ok(Amplification::LogN),
            other => Err(Error::InvalidArgument(format!(
                "unknown amplification `{other}`"
            ))),
        }
    }
}

impl fmt::Display for Amplification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Amplification::None => "none",
            Amplification::LogN => "logn",
        })
    }
}

/// Configuration of the emulated quantum subroutines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub seed: u64,
    pub cost_constant: Rational,
    pub amplification: Amplification,
    failure_prob: Rational,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0,
            cost_constant: Rational::from_integer(1),
            amplification: Amplification::None,
            failure_prob: Rational::from_integer(0),
        }
    }
}

impl OracleConfig {
    pub fn with_seed(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn amplified(mut self, amplification: Amplification) -> Self {
        self.amplification = amplification;
        self
    }

    /// Enables one-sided failure injection: each batch search omits one
    /// marked item with probability `p <= 1/3`.
    pub fn with_failure_prob(mut self, p: Rational) -> Result<Self> {
        if p > Rational::new(1, 3) {
            return Err(Error::InvalidArgument(format!(
                "failure probability {p} exceeds 1/3"
            )));
        }
        self.failure_prob = p;
        Ok(self)
    }

    pub fn failure_prob(&self) -> Rational {
        self.failure_prob
    }

    /// Repetition factor applied to searches serving a graph on `n_context`
    /// vertices.
    pub fn amplification_for(&self, n_context: usize) -> u64 {
        match self.amplification {
            Amplification::None => 1,
            Amplification::LogN => ceil_log2(n_context as u64 + 2),
        }
    }
}

pub fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    u64::from(64 - (x - 1).leading_zeros())
}

/// `ceil(sqrt(x))` in exact integer arithmetic.
pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.isqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// `ceil(sqrt(num / den))` for `den > 0`: the least `s` with `s^2 * den >= num`.
pub fn ceil_sqrt_ratio(num: u64, den: u64) -> u64 {
    assert!(den > 0);
    let (num, den) = (u128::from(num), u128::from(den));
    let mut s = ((num / den) as u64).isqrt() as u128;
    while s * s * den < num {
        s += 1;
    }
    s as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Primitive {
    GroverBatch,
    GroverEmptyCheck,
    GroverSingle,
    Counting,
}

impl Primitive {
    pub const ALL: [Primitive; 4] = [
        Primitive::GroverBatch,
        Primitive::GroverEmptyCheck,
        Primitive::GroverSingle,
        Primitive::Counting,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Primitive::GroverBatch => "grover_batch",
            Primitive::GroverEmptyCheck => "grover_empty_check",
            Primitive::GroverSingle => "grover_single",
            Primitive::Counting => "counting",
        }
    }
}

/// Accumulated quantum charges of one run.
#[derive(Debug, Clone)]
pub struct QueryLedger {
    cost_constant: Rational,
    amplification: u64,
    units: [Cell<u64>; 4],
    calls: [Cell<u64>; 4],
    probes: ProbeCounter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownEntry {
    pub primitive: Primitive,
    pub calls: u64,
    pub units: u64,
}

/// Plain-value copy of a ledger.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    #[serde(with = "ratio_string")]
    pub charged_queries: Rational,
    pub raw_probes: u64,
    pub breakdown: Vec<BreakdownEntry>,
    pub amplification: u64,
}

impl LedgerSnapshot {
    pub fn units(&self) -> u64 {
        self.breakdown.iter().map(|b| b.units).sum()
    }

    /// Charge and probes accumulated since `earlier` (same ledger).
    pub fn since(&self, earlier: &LedgerSnapshot) -> LedgerSnapshot {
        LedgerSnapshot {
            charged_queries: self.charged_queries - earlier.charged_queries,
            raw_probes: self.raw_probes - earlier.raw_probes,
            breakdown: self
                .breakdown
                .iter()
                .zip(&earlier.breakdown)
                .map(|(a, b)| BreakdownEntry {
                    primitive: a.primitive,
                    calls: a.calls - b.calls,
                    units: a.units - b.units,
                })
                .collect(),
            amplification: self.amplification,
        }
    }
}

pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => s
            .trim()
            .parse()
            .map(Rational::from_integer)
            .map_err(|_| bad()),
    }
}

mod ratio_string {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl QueryLedger {
    pub fn new(cost_constant: Rational, amplification: u64) -> Self {
        QueryLedger {
            cost_constant,
            amplification,
            units: Default::default(),
            calls: Default::default(),
            probes: ProbeCounter::new(),
        }
    }

    pub fn charge(&self, primitive: Primitive, units: u64) {
        let i = primitive as usize;
        self.units[i].set(self.units[i].get() + units);
        self.calls[i].set(self.calls[i].get() + 1);
    }

    pub fn units(&self) -> u64 {
        self.units.iter().map(Cell::get).sum()
    }

    pub fn units_of(&self, primitive: Primitive) -> u64 {
        self.units[primitive as usize].get()
    }

    pub fn calls_of(&self, primitive: Primitive) -> u64 {
        self.calls[primitive as usize].get()
    }

    pub fn amplification(&self) -> u64 {
        self.amplification
    }

    pub fn cost_constant(&self) -> Rational {
        self.cost_constant
    }

    pub fn charged_queries(&self) -> Rational {
        self.cost_constant * Rational::from_integer(self.units() * self.amplification)
    }

    pub fn probes(&self) -> &ProbeCounter {
        &self.probes
    }

    pub fn raw_probes(&self) -> u64 {
        self.probes.get()
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            charged_queries: self.charged_queries(),
            raw_probes: self.raw_probes(),
            breakdown: Primitive::ALL
                .iter()
                .map(|&p| BreakdownEntry {
                    primitive: p,
                    calls: self.calls_of(p),
                    units: self.units_of(p),
                })
                .collect(),
            amplification: self.amplification,
        }
    }
}

/// Result of a single-item search, with the number of marked items the
/// emulator saw.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingleSearch {
    pub found: Option<usize>,
    pub marked: usize,
}

/// Seeded emulator of the quantum subroutines, owning the run's ledger.
///
/// All methods take `&self` so that predicates can capture the searcher to
/// meter their own probes.
#[derive(Debug)]
pub struct Searcher {
    config: OracleConfig,
    rng: RefCell<ChaCha8Rng>,
    ledger: QueryLedger,
}

impl Searcher {
    pub fn new(config: &OracleConfig, n_context: usize) -> Self {
        Searcher {
            config: config.clone(),
            rng: RefCell::new(ChaCha8Rng::seed_from_u64(config.seed)),
            ledger: QueryLedger::new(config.cost_constant, config.amplification_for(n_context)),
        }
    }

    pub fn config(&self) -> &OracleConfig {
        &self.config
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> QueryLedger {
        self.ledger
    }

    pub fn probes(&self) -> &ProbeCounter {
        self.ledger.probes()
    }

    fn fails(&self) -> bool {
        let p = self.config.failure_prob;
        *p.numer() > 0 && self.rng.borrow_mut().gen_range(0..*p.denom()) < *p.numer()
    }

    fn scan(domain: usize, mut predicate: impl FnMut(usize) -> bool) -> Vec<usize> {
        (0..domain).filter(|&i| predicate(i)).collect()
    }

    /// Finds every marked index of `0..domain`, in seeded random order.
    pub fn find_all(&self, domain: usize, predicate: impl FnMut(usize) -> bool) -> Vec<usize> {
        let mut marked = Self::scan(domain, predicate);
        let (k, l) = (marked.len() as u64, domain as u64);
        self.ledger.charge(Primitive::GroverBatch, ceil_sqrt(k * l));
        self.ledger
            .charge(Primitive::GroverEmptyCheck, ceil_sqrt(l));
        let mut rng = self.rng.borrow_mut();
        marked.shuffle(&mut *rng);
        drop(rng);
        if !marked.is_empty() && self.fails() {
            marked.pop();
        }
        marked
    }

    /// Finds one marked index chosen uniformly by the seeded generator.
    pub fn find_one(&self, domain: usize, predicate: impl FnMut(usize) -> bool) -> Option<usize> {
        self.find_one_counted(domain, predicate).found
    }

    pub fn find_one_counted(
        &self,
        domain: usize,
        predicate: impl FnMut(usize) -> bool,
    ) -> SingleSearch {
        let marked = Self::scan(domain, predicate);
        let (k, l) = (marked.len() as u64, domain as u64);
        let units = if k == 0 {
            ceil_sqrt(l)
        } else {
            ceil_sqrt_ratio(l, k)
        };
        self.ledger.charge(Primitive::GroverSingle, units);
        let found = if marked.is_empty() {
            None
        } else {
            let pick = marked[self.rng.borrow_mut().gen_range(0..marked.len())];
            (!self.fails()).then_some(pick)
        };
        SingleSearch {
            found,
            marked: marked.len(),
        }
    }

    /// Estimates the number of ones within `floor(sqrt(n))`, clamped to `[0, n]`.
    pub fn count(&self, bits: &[bool]) -> usize {
        let n = bits.len();
        assert!(n >= 1, "counting needs a non-empty string");
        let exact = bits.iter().filter(|&&b| b).count() as i64;
        let spread = (n as u64).isqrt() as i64;
        let delta = self.rng.borrow_mut().gen_range(-spread..=spread);
        self.ledger.charge(Primitive::Counting, ceil_sqrt(n as u64));
        (exact + delta).clamp(0, n as i64) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn searcher() -> Searcher {
        Searcher::new(&OracleConfig::with_seed(3), 10)
    }

    #[test]
    fn integer_roots() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(400), 20);
        assert_eq!(ceil_sqrt(401), 21);
        assert_eq!(ceil_sqrt_ratio(16, 4), 2);
        assert_eq!(ceil_sqrt_ratio(17, 4), 3);
        assert_eq!(ceil_sqrt_ratio(3, 4), 1);
        for x in 1..2000u64 {
            let s = ceil_sqrt(x);
            assert!(s * s >= x && (s - 1) * (s - 1) < x);
        }
    }

    #[test]
    fn log_amplification() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        let cfg = OracleConfig::default().amplified(Amplification::LogN);
        assert_eq!(cfg.amplification_for(0), 1);
        assert_eq!(cfg.amplification_for(6), 3);
        assert_eq!(cfg.amplification_for(1024), 11);
    }

    #[test]
    fn batch_charge() {
        let s = searcher();
        let found = s.find_all(100, |i| i % 25 == 0);
        assert_eq!(found.len(), 4);
        assert_eq!(s.ledger().units(), 30);
        assert_eq!(s.ledger().charged_queries(), Rational::from_integer(30));
    }

    #[test]
    fn emptiness_only() {
        let s = searcher();
        assert!(s.find_all(64, |_| false).is_empty());
        assert_eq!(s.ledger().units(), 8);
    }

    #[test]
    fn all_marked_is_permutation() {
        let s = searcher();
        let mut found = s.find_all(10, |_| true);
        found.sort_unstable();
        assert_eq!(found, (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn single_search_charges() {
        let s = searcher();
        let hit = s.find_one(16, |i| i % 4 == 1);
        assert!(hit.is_some_and(|i| i % 4 == 1));
        assert_eq!(s.ledger().units(), 2);
        let s = searcher();
        assert_eq!(s.find_one(9, |_| false), None);
        assert_eq!(s.ledger().units(), 3);
    }

    #[test]
    fn single_search_is_deterministic() {
        let a = searcher().find_one(50, |i| i % 3 == 0);
        let b = searcher().find_one(50, |i| i % 3 == 0);
        assert_eq!(a, b);
    }

    #[test]
    fn counting_window() {
        let s = searcher();
        for _ in 0..100 {
            assert!(s.count(&[false; 16]) <= 4);
        }
        assert_eq!(s.ledger().units_of(Primitive::Counting), 400);
        // one bit: the estimate stays within [0, 1]
        assert!(s.count(&[true]) <= 1);
    }

    #[test]
    fn cost_constant_and_amplification_scale_charge() {
        let cfg = OracleConfig {
            cost_constant: Rational::new(3, 2),
            ..OracleConfig::with_seed(1)
        }
        .amplified(Amplification::LogN);
        let s = Searcher::new(&cfg, 6);
        s.find_all(100, |i| i < 4);
        assert_eq!(s.ledger().amplification(), 3);
        assert_eq!(
            s.ledger().charged_queries(),
            Rational::new(3, 2) * Rational::from_integer(90)
        );
    }

    #[test]
    fn failure_injection_omits_one_item() {
        let cfg = OracleConfig::with_seed(5)
            .with_failure_prob(Rational::new(1, 3))
            .unwrap();
        let s = Searcher::new(&cfg, 10);
        let sizes: Vec<usize> = (0..300).map(|_| s.find_all(20, |i| i < 5).len()).collect();
        assert!(sizes.iter().all(|&k| k == 4 || k == 5));
        let misses = sizes.iter().filter(|&&k| k == 4).count();
        assert!((50..150).contains(&misses), "misses = {misses}");
        assert!(OracleConfig::default()
            .with_failure_prob(Rational::new(1, 2))
            .is_err());
    }

    #[test]
    fn snapshot_delta() {
        let s = searcher();
        s.find_all(16, |i| i < 4);
        let before = s.ledger().snapshot();
        s.find_all(9, |_| false);
        let delta = s.ledger().snapshot().since(&before);
        assert_eq!(delta.units(), 3);
        assert_eq!(delta.raw_probes, 0);
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1, 2));
        assert_eq!(format_rational(&Rational::new(4, 2)), "2");
        assert!(parse_rational("1/0").is_err());
    }
}
