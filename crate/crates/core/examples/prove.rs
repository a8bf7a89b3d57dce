//! Symbolic proofs: each identity is expanded through Binet's formula into
//! Laurent polynomials in X = φ^m, Y = φ^p, Z = φ^q, one parity class at a
//! time, with the seed kept formal.

use fibkit::dsl::{builtin_catalog, parse_identity};
use fibkit::verify::prove_symbolic;

fn main() {
    let cat = builtin_catalog();
    for n in 1..=4 {
        let r = prove_symbolic(cat.get("Eq3").unwrap(), Some(n)).unwrap();
        println!("{}", r.to_human(0));
    }
    for name in ["Eq8", "Lemma13", "Case19"] {
        println!("{}", prove_symbolic(cat.get(name).unwrap(), None).unwrap().to_human(0));
    }

    let wrong = parse_identity("2*F(m+q)*F(p) - F(m)*F(p+q) == sign(m)*F(q)*F(p-m)", &["m", "p", "q"]).unwrap();
    let r = prove_symbolic(&wrong, None).unwrap();
    println!("\ncorrupted identity: {}", r.status());
    println!("residual in parity class {}: {}", r.failures[0].point_string(), r.failures[0].diff);

    let nonlinear = parse_identity("F(m*p) == F(p*m)", &["m", "p"]).unwrap();
    println!("\n{}", prove_symbolic(&nonlinear, None).unwrap_err());
}
