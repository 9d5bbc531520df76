//! Canonical codes and the counting functions: enumerate every monadic
//! order-three relation over a two-element universe, show its code, and
//! check the counts that size the space.
//!
//! Run with: cargo run --example relation_codes

use hoq::encode::{counts, decode, encode, enumerate_relations, value};
use hoq::limits::Limits;
use hoq::types::TypeExpr;

fn main() {
    let limits = Limits::default();
    let n = 2u64;
    let ty = TypeExpr::monadic(3);

    let report = counts(3, 1, n, &limits).unwrap();
    println!("order 3, arity 1, universe {n}: {report}");
    println!();

    for rel in enumerate_relations(&ty, n, &limits).unwrap() {
        let code = encode(&rel, n, &limits).unwrap();
        let v = value(&rel, n, &limits).unwrap();
        let members: Vec<String> = rel
            .tuples()
            .iter()
            .map(|t| {
                let inner: Vec<String> = t[0]
                    .tuples()
                    .iter()
                    .map(|e| match &e[0] {
                        hoq::relation::RelationValue::Element(i) => i.to_string(),
                        _ => unreachable!(),
                    })
                    .collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        assert_eq!(decode(&code).unwrap(), rel);
        println!(
            "value {v:2}  code {code}  members {{{}}}",
            members.join(", ")
        );
    }

    println!();
    println!("towers grow fast: order 4 over the same universe needs");
    let tall = counts(4, 1, n, &limits).unwrap();
    println!("  {tall}");
    println!("and order 4 at arity 2 over universe 3 is refused:");
    match counts(4, 2, 3, &limits) {
        Err(e) => println!("  {e}"),
        Ok(r) => println!("  unexpectedly fit: {r}"),
    }
}
