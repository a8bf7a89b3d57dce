use std::time::Instant;

use rayon::prelude::*;

use super::eval::eval_with;
use super::grid::{active_seeds, fold_outcomes, point_count, point_values, range_map, run_pool, summary, Tabled};
use super::report::{Failure, Mode, VerifyReport, REPORT_VERSION};
use super::{GridSpec, ParamPoint, VerifyError};
use crate::dsl::{Catalog, Identity};
use crate::seq::Seed;

/// Checks an expanded entry against the rank-parametric identity it was
/// derived from: at every grid point, each side of `entry` must equal the
/// same side of `source` with the rank fixed and the parameters relabeled.
pub fn verify_expansion(entry: &Identity, source: &Identity, grid: &GridSpec) -> Result<VerifyReport, VerifyError> {
    let start = Instant::now();
    let exp = entry
        .expands
        .as_ref()
        .ok_or_else(|| VerifyError::Grid(format!("`{}` is not an expansion", entry.name)))?;
    if exp.source != source.name {
        return Err(VerifyError::Grid(format!("`{}` expands `{}`, not `{}`", entry.name, exp.source, source.name)));
    }
    let rank = source
        .rank_param()
        .ok_or_else(|| VerifyError::Grid(format!("`{}` has no rank parameter", source.name)))?
        .to_string();
    let ranges = grid.resolve(entry)?;
    let seeds = active_seeds(entry, grid);
    let used: Vec<Seed> = seeds.iter().flatten().cloned().collect();
    let total = point_count(&ranges)?
        .checked_mul(seeds.len() as u64)
        .ok_or_else(|| VerifyError::Grid("grid has too many points".into()))?;

    let local = range_map(&ranges);
    let mut mapped = std::collections::BTreeMap::new();
    for (l, s) in &exp.relabel {
        mapped.insert(s.clone(), local[l]);
    }
    mapped.insert(rank.clone(), (exp.rank, exp.rank));
    let t_entry = Tabled::build(&[&entry.lhs, &entry.rhs], &local, &used);
    let t_source = Tabled::build(&[&source.lhs, &source.rhs], &mapped, &used);

    let check = |i: u64| -> Result<Option<Failure>, VerifyError> {
        let values = point_values(&ranges, i / seeds.len() as u64);
        let seed = &seeds[(i % seeds.len() as u64) as usize];
        let s = seed.clone().unwrap_or_else(Seed::fibonacci);
        let pt = ParamPoint {
            values: ranges.iter().map(|(k, _)| k.clone()).zip(values.iter().copied()).collect(),
            seed: s.clone(),
        };
        let mut src = ParamPoint { values: Default::default(), seed: s };
        for (l, sname) in &exp.relabel {
            src.values.insert(sname.clone(), pt.values[l]);
        }
        src.values.insert(rank.clone(), exp.rank);
        let at = |source| VerifyError::Eval { point: pt.to_string(), source };
        let el = eval_with(&entry.lhs, &pt, &t_entry).map_err(at)?;
        let er = eval_with(&entry.rhs, &pt, &t_entry).map_err(at)?;
        let sl = eval_with(&source.lhs, &src, &t_source).map_err(at)?;
        let sr = eval_with(&source.rhs, &src, &t_source).map_err(at)?;
        if el == sl && er == sr {
            return Ok(None);
        }
        let (lhs, rhs, which) = if el != sl { (el, sl, "lhs") } else { (er, sr, "rhs") };
        let note = format!("{which} of {} vs {which} of {} at {src}", entry.name, source.name);
        Ok(Some(Failure::numeric(pt.values.clone(), values, seed.as_ref(), &lhs, &rhs, Some(note))))
    };

    let outcomes = run_pool(None, || (0..total).into_par_iter().map(check).collect::<Vec<_>>())?;
    let mut report = VerifyReport {
        version: REPORT_VERSION,
        identity: entry.name.clone(),
        paper_tag: entry.paper_tag.clone(),
        mode: Mode::Grid,
        detail: Some(format!("matches {} at {rank}={}", source.name, exp.rank)),
        grid: summary(&ranges, &used),
        total,
        failures: fold_outcomes(outcomes)?,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    report.sort_failures();
    Ok(report)
}

/// [`verify_expansion`] for every expanded entry of `catalog`.
pub fn verify_expansions(catalog: &Catalog, grid: &GridSpec) -> Result<Vec<VerifyReport>, VerifyError> {
    catalog
        .entries()
        .iter()
        .filter_map(|e| e.expands.as_ref().map(|x| (e, x)))
        .map(|(e, x)| {
            let source = catalog
                .get(&x.source)
                .ok_or_else(|| VerifyError::Grid(format!("`{}` expands unknown entry `{}`", e.name, x.source)))?;
            verify_expansion(e, source, grid)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtin_catalog;

    #[test]
    fn all_expansions_match_their_sources() {
        let grid = GridSpec::default_grid().with_range("m", -4, 4).with_range("n", -4, 4).with_range("p", -4, 4);
        let reports = verify_expansions(&builtin_catalog(), &grid).unwrap();
        assert_eq!(reports.len(), 16);
        for r in reports {
            assert!(r.passed(), "{}", r.to_human(2));
        }
    }

    #[test]
    fn wrong_rank_is_caught() {
        let cat = builtin_catalog();
        let mut entry = cat.get("S3.n2.F-forward").unwrap().clone();
        entry.expands.as_mut().unwrap().rank = 3;
        let grid = GridSpec::default_grid().with_range("m", -2, 2).with_range("n", -2, 2).with_range("p", -2, 2);
        let r = verify_expansion(&entry, cat.get("Eq1").unwrap(), &grid).unwrap();
        assert!(!r.passed());
    }
}
