//! Classifying formulas: quantified order, alternation blocks, the
//! monadic restriction, and operator shape.
//!
//! Run with: cargo run --example fragment_reports

use hoq::classify::classify;
use hoq::normalize::{check_operator_nf, monadic_lint};
use hoq::parse::{parse_formula, parse_type};
use hoq::structure::Vocabulary;

fn main() {
    let vocab = Vocabulary::new(vec![
        ("E".into(), parse_type("(i,i)").unwrap()),
        ("Z".into(), parse_type("(i)").unwrap()),
    ])
    .unwrap();

    let samples = [
        "E(x,x) | !E(x,x)",
        "exists X:(i,i). forall x:i. X(x,x)",
        "exists X:((i)). forall Y:((i)). X(Z) | Y(Z)",
        "forall X:(i). exists x:i. X(x)",
        "TC[x; y : E(x,y)](bot:i; top:i)",
    ];
    for text in samples {
        let f = parse_formula(text).unwrap();
        let report = classify(&f, &vocab);
        println!("{text}");
        println!(
            "  order {} | blocks {} (prenex {}) | co {} | free order {} | monadic {} | prenex {} | operator-free {}",
            report.max_quantified_order,
            report.alternation_blocks,
            report.alternation_blocks_prenex,
            report.leading_universal,
            report.max_free_order,
            report.monadic,
            report.prenex,
            report.operator_free,
        );
    }
    println!();

    // The monadic lint names offending binders; vocabulary symbols of any
    // arity are allowed.
    let wide = parse_formula("exists X:(i,i). forall y:i. X(y,y) & E(y,y)").unwrap();
    let (ok, offenders) = monadic_lint(&wide);
    println!("monadic({wide:?})", wide = "exists X:(i,i). ...");
    println!("  ok {ok}, offenders {offenders:?}");
    println!();

    // Operator normal form: closures applied at (bottom; top) with
    // operator-free bodies.
    for text in [
        "TC[x; y : E(x,y)](bot:i; top:i)",
        "TC[x; y : E(x,y)](z; t)",
        "PFP[P, x:i : P(x)](bot:i)",
    ] {
        let f = parse_formula(text).unwrap();
        println!(
            "operator normal form: {:5} for {text}",
            check_operator_nf(&f)
        );
    }
}
