//! Browse the built-in identity catalog and parse identities of your own.

use fibkit::dsl::{builtin_catalog, parse_identity, pretty_print};

fn main() {
    let cat = builtin_catalog();
    println!("{} identities", cat.len());
    for id in cat.entries() {
        let rank = id.rank_param().map(|r| format!(" rank={r}")).unwrap_or_default();
        println!("  {:<20} [{}]{rank}", id.name, id.paper_tag);
    }

    let eq2 = cat.get("Eq2").unwrap();
    println!("\n{}: {}", eq2.name, eq2);
    if let Some(x) = &cat.get("S3.n2.L-forward").unwrap().expands {
        println!("S3.n2.L-forward is {} at n={} with {:?}", x.source, x.rank, x.relabel);
    }

    let id = parse_identity("F(2n)   ==  F(n)*L(n)", &["n"]).unwrap();
    println!("\nparsed and reprinted: {}", pretty_print(&id));

    match parse_identity("F(n) == G(k)", &["n"]) {
        Ok(_) => unreachable!(),
        Err(e) => println!("rejected: {e}"),
    }
}
