//! Cross-check the fast evaluator against the brute-force oracle, which only
//! uses recurrence tables and Pascal's triangle.

use std::collections::BTreeMap;

use fibkit::dsl::builtin_catalog;
use fibkit::oracle::{index_range, Oracle, OracleConfig};
use fibkit::seq::Seed;
use fibkit::verify::{eval_side, GridSpec, ParamPoint};

fn main() {
    let cat = builtin_catalog();
    let eq4 = cat.get("Eq4").unwrap();
    let ranges: BTreeMap<String, (i64, i64)> =
        [("n", (0, 5)), ("m", (-8, 8)), ("p", (-8, 8)), ("q", (-8, 8))].map(|(k, r)| (k.to_string(), r)).into();

    println!("Eq4 lhs reaches indices {:?}", index_range(&eq4.lhs, &ranges));
    let cfg = OracleConfig::covering(&[&eq4.lhs, &eq4.rhs], &ranges, GridSpec::standard_seeds());
    println!("oracle window {}..{}, Pascal rows 0..={}", cfg.lo, cfg.hi, cfg.binom_rows);
    let oracle = Oracle::new(&cfg).unwrap();

    let mut checked = 0;
    for n in 0..=5 {
        for m in [-8, -3, 0, 5] {
            for q in [-7, 1, 8] {
                for seed in GridSpec::standard_seeds() {
                    let pt = ParamPoint::new([("n", n), ("m", m), ("p", 2), ("q", q)], seed);
                    for side in [&eq4.lhs, &eq4.rhs] {
                        assert_eq!(oracle.eval(side, &pt).unwrap(), eval_side(side, &pt).unwrap());
                        checked += 1;
                    }
                }
            }
        }
    }
    println!("{checked} evaluations agree");

    let pt = ParamPoint::new([("n", 1), ("m", 1), ("p", 2), ("q", 1)], Seed::fibonacci());
    println!("Eq4 at {pt}: lhs {} rhs {}", oracle.eval(&eq4.lhs, &pt).unwrap(), oracle.eval(&eq4.rhs, &pt).unwrap());
}
