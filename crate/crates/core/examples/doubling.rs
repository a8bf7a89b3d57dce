//! Fast doubling against plain iteration.
//!
//! cargo run --release --example doubling -- 1000000

use std::time::Instant;

use fibkit::seq::{fib_iterative, fib_pair_doubling};

fn main() {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100_000);

    let t = Instant::now();
    let (f, _) = fib_pair_doubling(n);
    let fast = t.elapsed();
    let digits = f.to_string();
    println!("F({n}) has {} digits, doubling took {fast:?}", digits.len());
    println!("leading {}..., trailing ...{}", &digits[..digits.len().min(20)], &digits[digits.len().saturating_sub(20)..]);

    if n <= 200_000 {
        let t = Instant::now();
        let slow = fib_iterative(n);
        println!("iteration took {:?}, equal: {}", t.elapsed(), slow == f);
    } else {
        println!("iteration skipped above 200000");
    }
}
