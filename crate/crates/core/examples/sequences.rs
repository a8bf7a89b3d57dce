//! Fibonacci, Lucas and seeded sequences at any integer index.
//!
//! cargo run --example sequences -- 3 7

use fibkit::seq::{self, Seed};

fn main() {
    let args: Vec<i64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let seed = match args[..] {
        [g0, g1] => Seed::new(g0, g1),
        _ => Seed::new(3, 7),
    };

    println!("{:>4} {:>8} {:>8} {:>10}", "n", "F(n)", "L(n)", format!("G{seed}"));
    for n in -6..=10 {
        println!("{n:>4} {:>8} {:>8} {:>10}", seq::fib(n), seq::lucas(n), seq::gen(&seed, n));
    }

    let t = seq::table(&seed, -3, 5).expect("non-empty range");
    let row: Vec<String> = t.values().iter().map(ToString::to_string).collect();
    println!("\ntable {}..{}: {}", t.lo(), t.hi(), row.join(" "));

    // G(n) = ((G(-1) + G(1)) F(n) + G(0) L(n)) / 2
    for n in [4, 5, -7] {
        let d = seq::decompose(&seed, n).expect("numerator is even");
        println!("decompose at {n}: {d} (direct {})", seq::gen(&seed, n));
    }
}
