use std::collections::BTreeMap;

use fibkit::dsl::{builtin_catalog, parse_expr, parse_identity, print_expr, DslError, Expr, SeqKind};
use fibkit::oracle::{index_range, Oracle, OracleConfig};
use fibkit::seq::{self, Seed};
use fibkit::verify::{binomial, eval_side, ParamPoint};
use fibkit::zphi::{phi_pow, GoldenInt};
use num_bigint::BigInt;
use proptest::prelude::*;

const PARAMS: [&str; 4] = ["n", "m", "p", "q"];

fn seed() -> impl Strategy<Value = Seed> {
    (-1000i64..1000, -1000i64..1000).prop_map(|(a, b)| Seed::new(a, b))
}

fn index_expr(bound: bool) -> BoxedStrategy<Expr> {
    let mut leaves: Vec<BoxedStrategy<Expr>> = vec![
        (0i64..20).prop_map(Expr::Int).boxed(),
        prop::sample::select(PARAMS.to_vec()).prop_map(Expr::sym).boxed(),
    ];
    if bound {
        leaves.push(Just(Expr::sym("k")).boxed());
    }
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
        ]
    })
    .boxed()
}

fn value_expr(bound: bool) -> BoxedStrategy<Expr> {
    let kinds = prop::sample::select(vec![SeqKind::F, SeqKind::L, SeqKind::G]);
    let leaf = prop_oneof![
        (0i64..50).prop_map(Expr::Int),
        (kinds, index_expr(bound)).prop_map(|(k, i)| Expr::Seq(k, Box::new(i))),
        index_expr(bound).prop_map(|i| Expr::Sign(Box::new(i))),
        index_expr(bound).prop_map(|i| Expr::Pow5Floor(Box::new(i))),
        (index_expr(bound), index_expr(bound)).prop_map(|(a, b)| Expr::Binom(Box::new(a), Box::new(b))),
    ];
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner, index_expr(bound)).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
        ]
    })
    .boxed()
}

fn side() -> BoxedStrategy<Expr> {
    prop_oneof![
        3 => value_expr(false),
        1 => (index_expr(false), index_expr(false), value_expr(true)).prop_map(|(lo, hi, body)| Expr::Sum {
            var: "k".into(),
            lo: Box::new(lo),
            hi: Box::new(hi),
            body: Box::new(body),
        }),
    ]
    .boxed()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_ast_round_trips(e in side()) {
        let text = print_expr(&e);
        let back = parse_expr(&text, &PARAMS).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn parser_never_panics(tokens in prop::collection::vec(prop::sample::select(vec![
        "F", "L", "G", "binom", "sign", "pow5floor", "sum", "(", ")", ",", "+", "-", "*", "^", "==",
        "n", "m", "k", "x", "0", "7", "2p", " ", "#", "99999999999999999999",
    ]), 0..24)) {
        let text = tokens.concat();
        let _ = parse_identity(&text, &["n", "m"]);
        let _ = parse_expr(&text, &["n", "m"]);
    }

    #[test]
    fn undeclared_symbols_are_rejected(name in "[a-j]{1,3}") {
        prop_assume!(!["n", "m"].contains(&name.as_str()));
        let err = parse_identity(&format!("F({name}) == F(n)"), &["n", "m"]).unwrap_err();
        let is_unbound = matches!(err, DslError::Unbound { .. });
        prop_assert!(is_unbound);
    }

    #[test]
    fn seeded_sequence_recurrence_and_decomposition(s in seed(), n in -200i64..200) {
        let g = |i| seq::gen(&s, i);
        prop_assert_eq!(g(n + 2), g(n + 1) + g(n));
        prop_assert_eq!(g(n), s.g0.clone() * seq::fib(n - 1) + s.g1.clone() * seq::fib(n));
        let twice: BigInt = (s.g_minus1() + g(1)) * seq::fib(n) + s.g0.clone() * seq::lucas(n);
        prop_assert_eq!(seq::decompose(&s, n).unwrap() * 2, twice);
    }

    #[test]
    fn phi_power_coefficients(n in -300i64..300) {
        prop_assert_eq!(phi_pow(n), GoldenInt::new(seq::fib(n - 1), seq::fib(n)));
    }

    #[test]
    fn table_agrees_with_point_evaluation(s in seed(), lo in -60i64..0, len in 1i64..80) {
        let t = seq::table(&s, lo, lo + len - 1).unwrap();
        for i in lo..lo + len {
            prop_assert_eq!(t.get(i).unwrap(), &seq::gen(&s, i));
        }
    }

    #[test]
    fn catalog_entries_agree_with_oracle(
        which in 0usize..29,
        vals in prop::collection::vec(-8i64..=8, 4),
        rank in 0i64..=5,
        s in seed(),
    ) {
        let cat = builtin_catalog();
        let id = &cat.entries()[which];
        let rank_name = id.rank_param();
        let values: BTreeMap<String, i64> = id
            .params
            .iter()
            .zip(&vals)
            .map(|(p, v)| (p.clone(), if Some(p.as_str()) == rank_name { rank } else { *v }))
            .collect();
        let pt = ParamPoint { values, seed: s };
        for e in [&id.lhs, &id.rhs] {
            prop_assert_eq!(eval_side(e, &pt).unwrap(), fibkit::oracle::oracle_eval(e, &pt).unwrap());
        }
    }

    #[test]
    fn index_range_bounds_every_reference(e in side(), vals in prop::collection::vec(-6i64..=6, 4)) {
        let ranges: BTreeMap<String, (i64, i64)> = PARAMS.iter().map(|p| (p.to_string(), (-6, 6))).collect();
        let cfg = OracleConfig::covering(&[&e], &ranges, vec![Seed::new(3, 7)]);
        prop_assume!(cfg.hi - cfg.lo < 100_000 && cfg.binom_rows < 2000);
        let oracle = Oracle::new(&cfg).unwrap();
        let pt = ParamPoint::new(PARAMS.iter().copied().zip(vals), Seed::new(3, 7));
        // tables built from the analysed window never run out
        match (oracle.eval(&e, &pt), eval_side(&e, &pt)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(_)) => {
                let window = matches!(a, fibkit::oracle::OracleError::OutOfWindow { .. });
                prop_assert!(!window, "{}", a);
            }
            (a, b) => prop_assert!(false, "oracle {:?} vs engine {:?}", a, b),
        }
        let _ = index_range(&e, &ranges);
    }
}

#[test]
fn pascal_matches_multiplicative_binomials() {
    let oracle = Oracle::new(&OracleConfig { lo: 0, hi: 1, seeds: vec![], binom_rows: 60 }).unwrap();
    for n in 0..=60 {
        for k in 0..=n {
            assert_eq!(oracle.binom(n, k).unwrap(), binomial(n, k), "C({n},{k})");
        }
    }
}

#[test]
fn every_catalog_side_round_trips() {
    for id in builtin_catalog().entries() {
        let params: Vec<&str> = id.params.iter().map(String::as_str).collect();
        for e in [&id.lhs, &id.rhs] {
            assert_eq!(&parse_expr(&print_expr(e), &params).unwrap(), e, "{}", id.name);
        }
    }
}
