//! The brute-force oracle: sweep every structure over a vocabulary and
//! either certify two formulas equivalent or print the smallest
//! counterexample.
//!
//! Run with: cargo run --example equivalence_oracle

use hoq::limits::Limits;
use hoq::oracle::{enumerate_structures, equivalent};
use hoq::parse::{parse_formula, parse_type};
use hoq::structure::{structure_to_string, Vocabulary};

fn main() {
    let limits = Limits::default();
    let vocab = Vocabulary::new(vec![("P".into(), parse_type("(i)").unwrap())]).unwrap();

    for n in 1..=3u64 {
        let count = enumerate_structures(&vocab, n, &limits).unwrap().len();
        println!("structures over {{P:(i)}} with universe {n}: {count}");
    }
    println!();

    let dual = (
        parse_formula("exists x:i. P(x)").unwrap(),
        parse_formula("!(forall x:i. !P(x))").unwrap(),
    );
    let verdict = equivalent(&dual.0, &dual.1, &vocab, 3, &limits).unwrap();
    println!("duality holds up to n = 3: {}", verdict.equivalent);

    let swapped = (
        parse_formula("exists x:i. P(x)").unwrap(),
        parse_formula("forall x:i. P(x)").unwrap(),
    );
    let verdict = equivalent(&swapped.0, &swapped.1, &vocab, 3, &limits).unwrap();
    println!("exists equals forall      : {}", verdict.equivalent);
    if let Some(ce) = verdict.counterexample {
        println!(
            "smallest counterexample (lhs={}, rhs={}):\n{}",
            ce.lhs,
            ce.rhs,
            structure_to_string(&vocab, &ce.structure)
        );
    }
}
