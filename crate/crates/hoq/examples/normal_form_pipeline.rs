//! The rewrite pipeline stage by stage on the classic merge example:
//! alpha-rename, prefix extraction, step and arity padding, and the
//! decreasing sort, with the shape report at the end.
//!
//! Run with: cargo run --example normal_form_pipeline

use hoq::normalize::{self, pipeline_stages};
use hoq::parse::parse_formula;
use hoq::print::print_formula;

fn main() {
    let f =
        parse_formula("(forall X:(i). exists Y:(i). P(X) & P(Y)) & (exists Z:(i). P(Z))").unwrap();
    println!("input : {}", print_formula(&f));
    for (name, stage) in pipeline_stages(&f).unwrap() {
        println!("{name:5} : {}", print_formula(&stage));
    }
    println!();

    // A mixed-order binder steps into uniform depth.
    let g = parse_formula("exists X:((i),i). forall Y:(i). forall y:i. X(Y,y)").unwrap();
    println!("mixed : {}", print_formula(&g));
    println!("step  : {}", print_formula(&normalize::to_snf(&g)));
    println!();

    // An increasing prefix sorts by absorbing the outer variable.
    let h = parse_formula("forall x:i. exists Y:(i). Y(x)").unwrap();
    let sorted = normalize::to_dnf(&h).unwrap();
    println!("inc   : {}", print_formula(&h));
    println!("sorted: {}", print_formula(&sorted));
    println!();

    let out = normalize::full_pipeline(&f).unwrap();
    let report = normalize::report(&f, &out);
    println!("report: {}", serde_json::to_string_pretty(&report).unwrap());
}
