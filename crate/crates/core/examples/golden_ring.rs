//! Arithmetic in Z[φ] and its fraction field, and Binet's formula evaluated
//! exactly.

use fibkit::zphi::{binet_fib, binet_lucas, phi_pow, GoldenInt, GoldenRat, LaurentPoly3};

fn main() {
    let phi = GoldenInt::phi();
    let x = GoldenInt::new(3, 5);
    println!("φ² = {}", &phi * &phi);
    println!("x = {x}, conj = {}, norm = {}", x.conj(), x.norm());
    println!("√5 = {}, (√5)² = {}", GoldenInt::sqrt5(), GoldenInt::sqrt5().pow(2));

    for n in [-5, -1, 0, 1, 10] {
        println!("φ^{n} = {}", phi_pow(n));
    }

    let r = GoldenRat::new(GoldenInt::new(-2, 3), 4);
    let inv = r.inv().expect("nonzero");
    println!("r = {r}, 1/r = {inv}, r * (1/r) = {}", &r * &inv);

    for n in [-8, 20, 90] {
        println!("Binet: F({n}) = {}, L({n}) = {}", binet_fib(n).unwrap(), binet_lucas(n).unwrap());
    }

    // X + X^-1, squared
    let p = &LaurentPoly3::var(0, 1) + &LaurentPoly3::var(0, -1);
    println!("(X + X^-1)^2 = {}", p.pow(2));
}
