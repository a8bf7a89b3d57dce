//! Check an identity at every point of a parameter grid, then break it and
//! look at the counterexamples.

use fibkit::dsl::{builtin_catalog, Expr, Identity};
use fibkit::seq::Seed;
use fibkit::verify::{verify_grid, GridSpec};

fn main() {
    let cat = builtin_catalog();
    let eq1 = cat.get("Eq1").unwrap();
    let grid = GridSpec::default_grid()
        .with_range("m", -6, 6)
        .with_range("p", -6, 6)
        .with_range("q", -6, 6)
        .with_seeds(vec![Seed::fibonacci(), Seed::lucas(), Seed::new(3, 7)]);

    let report = verify_grid(eq1, &grid).expect("grid evaluates");
    println!("{}", report.to_human(5));

    let broken = Identity {
        name: "Eq1-negated".into(),
        rhs: Expr::Neg(Box::new(eq1.rhs.clone())),
        ..eq1.clone()
    };
    let report = verify_grid(&broken, &grid).expect("grid evaluates");
    println!("{}", report.to_human(3));

    let first = &report.failures[0];
    println!("\nfirst failure as JSON:\n{}", serde_json::to_string_pretty(first).unwrap());
}
