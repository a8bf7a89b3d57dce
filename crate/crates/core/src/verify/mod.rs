//! Exact evaluation and verification of catalog identities.
//!
//! Three modes share one report type:
//! - **grid**: evaluate both sides at every point of a parameter grid, for
//!   every seed;
//! - **recurrence**: check the rank recurrence
//!   `S(n,m,p,q) = C(m+q) S(n-1,m,p,q) - C(m) S(n-1,m,p+q,q)` (with `C` = `F`
//!   or `L`) for one side of a summation identity;
//! - **symbolic**: expand both sides through Binet into Laurent polynomials in
//!   `X = φ^m`, `Y = φ^p`, `Z = φ^q` with formal seeds and check that the
//!   difference vanishes, one parity class of the parameters at a time.

mod eval;
mod expansion;
mod grid;
mod recurrence;
mod report;
mod symbolic;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::seq::Seed;

pub use eval::{binomial, eval_side, EvalError};
pub use expansion::{verify_expansion, verify_expansions};
pub use grid::{verify_grid, verify_grid_with, VerifyOptions};
pub use recurrence::{case_split_value, check_recurrence, Family, Side};
pub use report::{Failure, GridSummary, Mode, VerifyReport, REPORT_VERSION};
pub use symbolic::{prove_symbolic, FormalValue};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("bad grid: {0}")]
    Grid(String),
    #[error("at {point}: {source}")]
    Eval { point: String, source: EvalError },
    #[error("oracle at {point}: {message}")]
    Oracle { point: String, message: String },
    #[error("`{node}` is not affine in the free parameters once the rank is fixed")]
    NonAffine { node: String },
    #[error("cannot expand `{node}` symbolically: {reason}")]
    Unsupported { node: String, reason: String },
    #[error("internal fault: {0}")]
    InternalFault(String),
}

/// Concrete values for an identity's free parameters, plus the seed used for
/// `G` references.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamPoint {
    pub values: BTreeMap<String, i64>,
    pub seed: Seed,
}

impl ParamPoint {
    pub fn new<'a>(values: impl IntoIterator<Item = (&'a str, i64)>, seed: Seed) -> Self {
        ParamPoint {
            values: values.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            seed,
        }
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.values.get(name).copied()
    }

    pub fn with(&self, name: &str, value: i64) -> Self {
        let mut out = self.clone();
        out.values.insert(name.to_string(), value);
        out
    }
}

impl fmt::Display for ParamPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.values {
            write!(f, "{name}={v} ")?;
        }
        write!(f, "seed={}", self.seed)
    }
}

/// Inclusive integer range `lo..=hi`, written `lo..hi` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ParamRange {
    pub lo: i64,
    pub hi: i64,
}

impl ParamRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        ParamRange { lo, hi }
    }

    pub fn len(&self) -> u64 {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for ParamRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl FromStr for ParamRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once("..")
            .ok_or_else(|| format!("range `{s}` must look like lo..hi"))?;
        let lo = lo.trim().parse().map_err(|_| format!("bad lower bound in `{s}`"))?;
        let hi = hi.trim().parse().map_err(|_| format!("bad upper bound in `{s}`"))?;
        if lo > hi {
            return Err(format!("range `{s}` is empty"));
        }
        Ok(ParamRange { lo, hi })
    }
}

/// Parses a seed written `g0,g1`.
pub fn parse_seed(s: &str) -> Result<Seed, String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("seed `{s}` must look like g0,g1"))?;
    let g0 = a.trim().parse::<num_bigint::BigInt>().map_err(|_| format!("bad g0 in `{s}`"))?;
    let g1 = b.trim().parse::<num_bigint::BigInt>().map_err(|_| format!("bad g1 in `{s}`"))?;
    Ok(Seed { g0, g1 })
}

/// Parameter ranges and seeds for grid and recurrence runs.
///
/// A parameter with an explicit entry in `ranges` uses it; otherwise the rank
/// parameter (the one bounding the sums) uses `rank_range` and every other
/// parameter uses `param_range`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub ranges: BTreeMap<String, ParamRange>,
    pub rank_range: ParamRange,
    pub param_range: ParamRange,
    pub seeds: Vec<Seed>,
}

impl GridSpec {
    pub fn standard_seeds() -> Vec<Seed> {
        vec![Seed::new(0, 1), Seed::new(2, 1), Seed::new(3, 7), Seed::new(-4, 5)]
    }

    /// Rank `0..4`, other parameters `-8..8`, the four standard seeds.
    pub fn default_grid() -> Self {
        GridSpec {
            ranges: BTreeMap::new(),
            rank_range: ParamRange::new(0, 4),
            param_range: ParamRange::new(-8, 8),
            seeds: Self::standard_seeds(),
        }
    }

    /// The wider grid with rank `0..5`.
    pub fn standard() -> Self {
        GridSpec {
            rank_range: ParamRange::new(0, 5),
            ..Self::default_grid()
        }
    }

    pub fn with_range(mut self, name: &str, lo: i64, hi: i64) -> Self {
        self.ranges.insert(name.to_string(), ParamRange::new(lo, hi));
        self
    }

    pub fn with_seeds(mut self, seeds: Vec<Seed>) -> Self {
        self.seeds = seeds;
        self
    }

    /// Ranges for each of the identity's free parameters, in declaration order.
    pub fn resolve(&self, id: &crate::dsl::Identity) -> Result<Vec<(String, ParamRange)>, VerifyError> {
        if self.seeds.is_empty() {
            return Err(VerifyError::Grid("no seeds given".into()));
        }
        let rank = id.rank_param();
        id.params
            .iter()
            .map(|p| {
                let is_rank = Some(p.as_str()) == rank;
                let r = self.ranges.get(p).copied().unwrap_or(if is_rank {
                    self.rank_range
                } else {
                    self.param_range
                });
                if r.is_empty() {
                    return Err(VerifyError::Grid(format!("range for `{p}` is empty")));
                }
                if is_rank && r.lo < 0 {
                    return Err(VerifyError::Grid(format!(
                        "rank parameter `{p}` bounds a sum and must be >= 0, got {r}"
                    )));
                }
                Ok((p.clone(), r))
            })
            .collect()
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec::default_grid()
    }
}
