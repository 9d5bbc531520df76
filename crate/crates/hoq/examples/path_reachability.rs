//! Transitive closure over a small directed graph: build the path
//! structure, ask whether the endpoints are connected, and watch the
//! closure refuse the reverse direction.
//!
//! Run with: cargo run --example path_reachability

use hoq::eval::eval_closed;
use hoq::limits::Limits;
use hoq::parse::parse_formula;
use hoq::structure::structure_from_str;

fn main() {
    let limits = Limits::default();
    let (_, graph) = structure_from_str(
        r#"{
            "universe": 4,
            "vocabulary": {"E": "(i,i)", "src": "i", "dst": "i"},
            "interpretation": {"E": [[0,1],[1,2],[2,3]], "src": 0, "dst": 3}
        }"#,
    )
    .expect("the example structure is well-formed");

    let forward = parse_formula("TC[x; y : E(x,y)](src; dst)").unwrap();
    let backward = parse_formula("TC[x; y : E(x,y)](dst; src)").unwrap();
    let twice = parse_formula("TC[x; y : exists m:i. E(x,m) & E(m,y)](src; dst)").unwrap();

    println!(
        "path 0 -> 3        : {}",
        eval_closed(&graph, &forward, &limits).unwrap()
    );
    println!(
        "path 3 -> 0        : {}",
        eval_closed(&graph, &backward, &limits).unwrap()
    );
    println!(
        "two-step closure   : {}",
        eval_closed(&graph, &twice, &limits).unwrap()
    );

    // The closure is reflexive by definition: an endpoint reaches itself.
    let looped = parse_formula("TC[x; y : E(x,y)](dst; dst)").unwrap();
    println!(
        "self reachability  : {}",
        eval_closed(&graph, &looped, &limits).unwrap()
    );
}
