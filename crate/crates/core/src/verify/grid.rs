use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::eval::{eval_with, SeqLookup};
use super::report::{seed_strings, Failure, GridSummary, Mode, VerifyReport, REPORT_VERSION};
use super::{GridSpec, ParamPoint, ParamRange, VerifyError};
use crate::dsl::{Expr, Identity};
use crate::oracle::{self, Oracle, OracleConfig};
use crate::seq::{self, Seed, SeqTable};

/// Windows wider than this fall back to direct evaluation.
const MAX_TABLE_WIDTH: i64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Recompute every side with the brute-force oracle and report disagreements.
    pub use_oracle: bool,
    /// Record wall time in the report; off gives byte-identical output.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { workers: None, use_oracle: false, timing: true }
    }
}

/// Precomputed tables over the index window, falling back to direct calls
/// outside it.
pub(crate) struct Tabled {
    fib: Option<SeqTable>,
    lucas: Option<SeqTable>,
    gens: Vec<SeqTable>,
}

impl Tabled {
    pub(crate) fn build(exprs: &[&Expr], ranges: &BTreeMap<String, (i64, i64)>, seeds: &[Seed]) -> Tabled {
        let mut window: Option<(i64, i64)> = None;
        for e in exprs {
            if let Some((lo, hi)) = oracle::index_range(e, ranges) {
                window = Some(match window {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        let Some((lo, hi)) = window.filter(|(lo, hi)| hi.saturating_sub(*lo) <= MAX_TABLE_WIDTH) else {
            return Tabled { fib: None, lucas: None, gens: Vec::new() };
        };
        let make = |s: &Seed| seq::table(s, lo, hi).ok();
        Tabled {
            fib: make(&Seed::fibonacci()),
            lucas: make(&Seed::lucas()),
            gens: seeds.iter().filter_map(make).collect(),
        }
    }
}

impl SeqLookup for Tabled {
    fn fib(&self, n: i64) -> BigInt {
        self.fib.as_ref().and_then(|t| t.get(n)).cloned().unwrap_or_else(|| seq::fib(n))
    }
    fn lucas(&self, n: i64) -> BigInt {
        self.lucas.as_ref().and_then(|t| t.get(n)).cloned().unwrap_or_else(|| seq::lucas(n))
    }
    fn gen(&self, seed: &Seed, n: i64) -> BigInt {
        self.gens
            .iter()
            .find(|t| t.seed() == seed)
            .and_then(|t| t.get(n))
            .cloned()
            .unwrap_or_else(|| seq::gen(seed, n))
    }
}

/// Values of the `i`-th grid point, first parameter varying slowest.
pub(crate) fn point_values(ranges: &[(String, ParamRange)], mut i: u64) -> Vec<i64> {
    let mut out = vec![0; ranges.len()];
    for (slot, (_, r)) in ranges.iter().enumerate().rev() {
        let len = r.len();
        out[slot] = r.lo + (i % len) as i64;
        i /= len;
    }
    out
}

pub(crate) fn point_count(ranges: &[(String, ParamRange)]) -> Result<u64, VerifyError> {
    ranges.iter().try_fold(1u64, |acc, (_, r)| {
        acc.checked_mul(r.len()).ok_or_else(|| VerifyError::Grid("grid has too many points".into()))
    })
}

pub(crate) fn summary(ranges: &[(String, ParamRange)], seeds: &[Seed]) -> GridSummary {
    GridSummary {
        ranges: ranges.iter().map(|(k, r)| (k.clone(), [r.lo, r.hi])).collect(),
        seeds: seeds.iter().map(seed_strings).collect(),
        ..GridSummary::default()
    }
}

pub(crate) fn range_map(ranges: &[(String, ParamRange)]) -> BTreeMap<String, (i64, i64)> {
    ranges.iter().map(|(k, r)| (k.clone(), (r.lo, r.hi))).collect()
}

/// Seeds a run iterates over; identities without `G` need only one pass.
pub(crate) fn active_seeds(id: &Identity, grid: &GridSpec) -> Vec<Option<Seed>> {
    if id.uses_seed() {
        grid.seeds.iter().cloned().map(Some).collect()
    } else {
        vec![None]
    }
}

pub(crate) fn run_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, VerifyError> {
    match workers {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| VerifyError::Grid(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Keeps the failure list, or the error from the earliest point if any.
pub(crate) fn fold_outcomes(outcomes: Vec<Result<Option<Failure>, VerifyError>>) -> Result<Vec<Failure>, VerifyError> {
    let mut failures = Vec::new();
    for o in outcomes {
        if let Some(f) = o? {
            failures.push(f);
        }
    }
    Ok(failures)
}

pub fn verify_grid(id: &Identity, grid: &GridSpec) -> Result<VerifyReport, VerifyError> {
    verify_grid_with(id, grid, &VerifyOptions::default())
}

/// Evaluates both sides at every grid point and every seed.
pub fn verify_grid_with(id: &Identity, grid: &GridSpec, opts: &VerifyOptions) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let ranges = grid.resolve(id)?;
    let seeds = active_seeds(id, grid);
    let used: Vec<Seed> = seeds.iter().flatten().cloned().collect();
    let npoints = point_count(&ranges)?;
    let total = npoints
        .checked_mul(seeds.len() as u64)
        .ok_or_else(|| VerifyError::Grid("grid has too many points".into()))?;
    let rmap = range_map(&ranges);
    let sides = [&id.lhs, &id.rhs];
    let tables = Tabled::build(&sides, &rmap, &used);
    let oracle = if opts.use_oracle {
        let cfg = OracleConfig::covering(&sides, &rmap, used.clone());
        Some(Oracle::new(&cfg).map_err(|e| VerifyError::Grid(format!("oracle: {e}")))?)
    } else {
        None
    };

    let check = |i: u64| -> Result<Option<Failure>, VerifyError> {
        let values = point_values(&ranges, i / seeds.len() as u64);
        let seed = &seeds[(i % seeds.len() as u64) as usize];
        let pt = ParamPoint {
            values: ranges.iter().map(|(k, _)| k.clone()).zip(values.iter().copied()).collect(),
            seed: seed.clone().unwrap_or_else(Seed::fibonacci),
        };
        let at = |source| VerifyError::Eval { point: pt.to_string(), source };
        let lhs = eval_with(&id.lhs, &pt, &tables).map_err(at)?;
        let rhs = eval_with(&id.rhs, &pt, &tables).map_err(at)?;
        let mut note = None;
        if let Some(o) = &oracle {
            let oracle_err = |e: oracle::OracleError| VerifyError::Oracle {
                point: pt.to_string(),
                message: e.to_string(),
            };
            let ol = o.eval(&id.lhs, &pt).map_err(oracle_err)?;
            let or = o.eval(&id.rhs, &pt).map_err(oracle_err)?;
            if ol != lhs || or != rhs {
                note = Some(format!("oracle disagrees: oracle lhs={ol} rhs={or}"));
            }
        }
        if lhs == rhs && note.is_none() {
            return Ok(None);
        }
        Ok(Some(Failure::numeric(pt.values.clone(), values, seed.as_ref(), &lhs, &rhs, note)))
    };

    let outcomes = run_pool(opts.workers, || (0..total).into_par_iter().map(check).collect::<Vec<_>>())?;
    let failures = fold_outcomes(outcomes)?;
    let mut report = VerifyReport {
        version: REPORT_VERSION,
        identity: id.name.clone(),
        paper_tag: id.paper_tag.clone(),
        mode: Mode::Grid,
        detail: opts.use_oracle.then(|| "oracle cross-check".to_string()),
        grid: summary(&ranges, &used),
        total,
        failures,
        elapsed_ms: if opts.timing { start.elapsed().as_millis() as u64 } else { 0 },
    };
    report.sort_failures();
    Ok(report)
}
