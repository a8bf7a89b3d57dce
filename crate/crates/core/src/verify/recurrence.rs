use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::eval::eval_with;
use super::grid::{active_seeds, fold_outcomes, point_count, point_values, range_map, run_pool, summary, Tabled};
use super::report::{Failure, Mode, VerifyReport, REPORT_VERSION};
use super::{GridSpec, ParamPoint, ParamRange, VerifyError};
use crate::dsl::Identity;
use crate::seq::{self, Seed};

/// Coefficient sequence of the rank recurrence: `F` for the first flagship
/// family, `L` for the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Fibonacci,
    Lucas,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Lhs,
    Rhs,
}

impl Family {
    fn coeff(self, n: i64) -> BigInt {
        match self {
            Family::Fibonacci => seq::fib(n),
            Family::Lucas => seq::lucas(n),
        }
    }

    fn letter(self) -> char {
        match self {
            Family::Fibonacci => 'F',
            Family::Lucas => 'L',
        }
    }
}

/// Checks `S(n,m,p,q) = C(m+q) S(n-1,m,p,q) - C(m) S(n-1,m,p+q,q)` at every
/// grid point with `n >= 1`, where `S` is the chosen side of `id`.
///
/// `id` must have a rank parameter and shape parameters named `m`, `p`, `q`.
pub fn check_recurrence(id: &Identity, family: Family, side: Side, grid: &GridSpec) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let rank = id
        .rank_param()
        .ok_or_else(|| VerifyError::Grid(format!("`{}` has no rank parameter", id.name)))?
        .to_string();
    for p in ["m", "p", "q"] {
        if !id.params.iter().any(|x| x == p) {
            return Err(VerifyError::Grid(format!("`{}` has no parameter `{p}`", id.name)));
        }
    }
    let mut ranges = grid.resolve(id)?;
    for (name, r) in ranges.iter_mut() {
        if *name == rank {
            *r = ParamRange::new(r.lo.max(1), r.hi);
            if r.is_empty() {
                return Err(VerifyError::Grid(format!("recurrence needs `{rank}` >= 1 in range")));
            }
        }
    }
    let seeds = active_seeds(id, grid);
    let used: Vec<Seed> = seeds.iter().flatten().cloned().collect();
    let total = point_count(&ranges)?
        .checked_mul(seeds.len() as u64)
        .ok_or_else(|| VerifyError::Grid("grid has too many points".into()))?;
    let expr = match side {
        Side::Lhs => &id.lhs,
        Side::Rhs => &id.rhs,
    };

    // the shifted evaluations reach rank n-1 and p+q
    let mut wide = range_map(&ranges);
    let (qlo, qhi) = wide["q"];
    let (plo, phi) = wide["p"];
    wide.insert("p".into(), (plo + qlo.min(0), phi + qhi.max(0)));
    let (nlo, nhi) = wide[&rank];
    wide.insert(rank.clone(), (nlo - 1, nhi));
    let tables = Tabled::build(&[expr], &wide, &used);

    let check = |i: u64| -> Result<Option<Failure>, VerifyError> {
        let values = point_values(&ranges, i / seeds.len() as u64);
        let seed = &seeds[(i % seeds.len() as u64) as usize];
        let pt = ParamPoint {
            values: ranges.iter().map(|(k, _)| k.clone()).zip(values.iter().copied()).collect(),
            seed: seed.clone().unwrap_or_else(Seed::fibonacci),
        };
        let (n, m, p, q) = (pt.values[&rank], pt.values["m"], pt.values["p"], pt.values["q"]);
        let at = |source| VerifyError::Eval { point: pt.to_string(), source };
        let s = eval_with(expr, &pt, &tables).map_err(at)?;
        let down = pt.with(&rank, n - 1);
        let s_a = eval_with(expr, &down, &tables).map_err(at)?;
        let s_b = eval_with(expr, &down.with("p", p + q), &tables).map_err(at)?;
        let rhs = family.coeff(m + q) * s_a - family.coeff(m) * s_b;
        if s == rhs {
            return Ok(None);
        }
        Ok(Some(Failure::numeric(pt.values.clone(), values, seed.as_ref(), &s, &rhs, None)))
    };

    let outcomes = run_pool(None, || (0..total).into_par_iter().map(check).collect::<Vec<_>>())?;
    let mut report = VerifyReport {
        version: REPORT_VERSION,
        identity: id.name.clone(),
        paper_tag: id.paper_tag.clone(),
        mode: Mode::Recurrence,
        detail: Some(format!(
            "{} side, {}-coefficients",
            match side {
                Side::Lhs => "lhs",
                Side::Rhs => "rhs",
            },
            family.letter()
        )),
        grid: summary(&ranges, &used),
        total,
        failures: fold_outcomes(outcomes)?,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    report.sort_failures();
    Ok(report)
}

/// `F(p-nm+1) - (-1)^n F(p-nm-1)`, checked against `F(p-nm)` for even `n`
/// and `L(p-nm)` for odd `n`.
pub fn case_split_value(p: i64, n: i64, m: i64) -> Result<BigInt, VerifyError> {
    let idx = n
        .checked_mul(m)
        .and_then(|nm| p.checked_sub(nm))
        .filter(|i| i.checked_add(1).is_some() && i.checked_sub(1).is_some())
        .ok_or_else(|| VerifyError::Grid(format!("p - n*m overflows at p={p} n={n} m={m}")))?;
    let even = n.rem_euclid(2) == 0;
    let value = if even {
        seq::fib(idx + 1) - seq::fib(idx - 1)
    } else {
        seq::fib(idx + 1) + seq::fib(idx - 1)
    };
    let expected = if even { seq::fib(idx) } else { seq::lucas(idx) };
    if value != expected {
        return Err(VerifyError::InternalFault(format!(
            "case split at p={p} n={n} m={m}: got {value}, expected {expected}"
        )));
    }
    Ok(value)
}
