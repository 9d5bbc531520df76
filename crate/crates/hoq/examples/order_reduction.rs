//! Lowering a second-order query to first order: the structure blows up
//! from two to four elements, the quantifier becomes a guarded element
//! search, and the truth value survives.
//!
//! Run with: cargo run --example order_reduction

use hoq::limits::Limits;
use hoq::parse::parse_formula;
use hoq::print::print_formula;
use hoq::reduce;
use hoq::structure::{structure_from_str, structure_to_string};

fn main() {
    let limits = Limits::default();
    let (vocab, source) = structure_from_str(
        r#"{
            "universe": 2,
            "vocabulary": {"<": "(i,i)", "c": "i"},
            "interpretation": {"<": [[0,1]], "c": 1}
        }"#,
    )
    .unwrap();
    let f = parse_formula("exists X:(i). X(c) & !(exists y:i. X(y) & y < c)").unwrap();

    let plan = reduce::plan(&vocab, &f, source.universe, &limits).unwrap();
    println!("shared arity bound : {}", plan.arity);
    println!("target universe    : {}", plan.target_universe);
    println!();

    let (target, reduced) = reduce::reduced_pair(&plan, &source, &f).unwrap();
    println!("source formula     : {}", print_formula(&f));
    println!("reduced formula    : {}", print_formula(&reduced));
    println!();
    println!("reduced structure  :");
    println!("{}", structure_to_string(&plan.target, &target));
    println!();

    let agreement = reduce::check_reduction(&plan, &source, &f, &limits).unwrap();
    println!("direct and reduced evaluations agree: {agreement}");
}
