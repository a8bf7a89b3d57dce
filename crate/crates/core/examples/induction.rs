//! The rank recurrence behind the summation identities, checked pointwise:
//! S(n,m,p,q) = C(m+q) S(n-1,m,p,q) - C(m) S(n-1,m,p+q,q).

use fibkit::dsl::builtin_catalog;
use fibkit::verify::{case_split_value, check_recurrence, Family, GridSpec, Side};

fn main() {
    let cat = builtin_catalog();
    let grid = GridSpec::default_grid()
        .with_range("n", 1, 4)
        .with_range("m", -5, 5)
        .with_range("p", -5, 5)
        .with_range("q", -5, 5);

    for (name, family, side) in [
        ("Eq1", Family::Fibonacci, Side::Lhs),
        ("Eq1", Family::Fibonacci, Side::Rhs),
        ("Eq2", Family::Lucas, Side::Lhs),
        ("Eq2", Family::Lucas, Side::Rhs),
        ("Eq1", Family::Lucas, Side::Lhs),
    ] {
        let r = check_recurrence(cat.get(name).unwrap(), family, side, &grid).unwrap();
        println!("{}", r.to_human(1));
    }

    // F(p-nm+1) - (-1)^n F(p-nm-1) is F(p-nm) for even n, L(p-nm) for odd n
    for (p, n, m) in [(5, 2, 1), (5, 1, 1), (0, 0, 0), (9, 3, -2)] {
        println!("case split p={p} n={n} m={m}: {}", case_split_value(p, n, m).unwrap());
    }
}
