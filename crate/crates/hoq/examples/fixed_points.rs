//! The four fixed-point families side by side on one universe: a partial
//! fixed point that cycles, an inflationary one that grows to a limit, a
//! nondeterministic union of reachable common fixed points, and an
//! alternating tree.
//!
//! Run with: cargo run --example fixed_points

use hoq::eval::{eval, Environment, Evaluator};
use hoq::formula::Binder;
use hoq::limits::Limits;
use hoq::parse::parse_formula;
use hoq::relation::RelationValue;
use hoq::structure::Structure;
use hoq::types::TypeExpr;

fn main() {
    let limits = Limits::default();
    let s = Structure::new(3)
        .unwrap()
        .with(
            "suc",
            RelationValue::set(
                TypeExpr::uniform(2, 2),
                vec![
                    vec![RelationValue::Element(0), RelationValue::Element(1)],
                    vec![RelationValue::Element(1), RelationValue::Element(2)],
                ],
            ),
        )
        .with("zero", RelationValue::Element(0));

    // The flipping body never settles: stages alternate between empty and
    // full, so the partial fixed point answers false everywhere.
    let flip = parse_formula("PFP[R, x:i : !R(x)](zero)").unwrap();
    println!("PFP of negation        : {}", run(&s, &flip, &limits));

    // Seed zero and walk the successor: the inflationary iteration
    // reaches every element.
    let reach = parse_formula("IFP[R, x:i : x = zero | exists w:i. R(w) & suc(w,x)](arg)").unwrap();
    for e in 0..3 {
        let mut env = Environment::new();
        env.insert("arg".into(), RelationValue::Element(e));
        let (truth, stats) = eval(&s, &env, &reach, &limits).unwrap();
        println!(
            "IFP successor reach {e}  : {truth} ({} stages)",
            stats.fixpoint_stages
        );
    }

    // Watch the stage sequence itself.
    let body = parse_formula("x = zero | exists w:i. R(w) & suc(w,x)").unwrap();
    let wrapped = hoq::eval::inflationary("R", &[Binder::new("x", TypeExpr::Iota)], &body);
    let mut evaluator = Evaluator::new(&s, Environment::new(), limits);
    let (stages, fixed) = evaluator
        .fixpoint_stages("R", &[Binder::new("x", TypeExpr::Iota)], &wrapped)
        .unwrap();
    println!(
        "IFP stage cardinalities: {:?}",
        stages.iter().map(|p| p.tuples().len()).collect::<Vec<_>>()
    );
    println!(
        "IFP fixed point size   : {:?}",
        fixed.map(|p| p.tuples().len())
    );

    // Two bodies that each insist on one element: the only common fixed
    // point reachable from empty holds both.
    let union = parse_formula(
        "NPFP[R, x:i : R(x) | x = zero ; R(x) | exists w:i. suc(zero,w) & x = w](arg)",
    )
    .unwrap();
    for e in 0..3 {
        let mut env = Environment::new();
        env.insert("arg".into(), RelationValue::Element(e));
        println!(
            "NPFP union member {e}    : {}",
            eval(&s, &env, &union, &limits).unwrap().0
        );
    }

    // Alternation: with both bodies fixing the empty stage the tree is a
    // single leaf and nothing is accepted.
    let stalled = parse_formula("APFP[R, x:i : R(x) ; R(x)](zero)").unwrap();
    println!("APFP of the identity   : {}", run(&s, &stalled, &limits));
}

fn run(s: &Structure, f: &hoq::formula::Formula, limits: &Limits) -> bool {
    eval(s, &Environment::new(), f, limits).unwrap().0
}
