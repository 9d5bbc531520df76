//! Arithmetic on relations through their codes: the generated order and
//! addition predicates agree with integer arithmetic on code values.
//!
//! Run with: cargo run --example arithmetic_predicates

use hoq::encode::{enumerate_relations, value};
use hoq::eval::{eval, Environment};
use hoq::gen;
use hoq::limits::Limits;
use hoq::print::print_formula;
use hoq::relation::RelationValue;
use hoq::structure::Structure;
use hoq::types::TypeExpr;

fn main() {
    let limits = Limits::default();
    let n = 2u64;
    let s = Structure::new(n).unwrap().with(
        "<",
        RelationValue::set(
            TypeExpr::uniform(2, 2),
            vec![vec![RelationValue::Element(0), RelationValue::Element(1)]],
        ),
    );

    println!("the exact-addition predicate over order-2 monadic relations:");
    println!("{}", print_formula(&gen::gen_plus(1, 2)));
    println!();

    // All sixteen order-3 relations, added pairwise through the formula.
    let rels: Vec<(RelationValue, u64)> = enumerate_relations(&TypeExpr::monadic(3), n, &limits)
        .unwrap()
        .map(|rel| {
            let v = num_traits::ToPrimitive::to_u64(&value(&rel, n, &limits).unwrap()).unwrap();
            (rel, v)
        })
        .collect();
    let plus = gen::gen_plus_for(1, 3, "X", "Y", "Z");
    let overflow = gen::gen_overflow_for(1, 3, "X", "Y");

    let mut additions = 0;
    let mut overflows = 0;
    for (x, vx) in &rels {
        for (y, vy) in &rels {
            let mut env = Environment::new();
            env.insert("X".into(), x.clone());
            env.insert("Y".into(), y.clone());
            if eval(&s, &env, &overflow, &limits).unwrap().0 {
                overflows += 1;
                continue;
            }
            for (z, vz) in &rels {
                env.insert("Z".into(), z.clone());
                if eval(&s, &env, &plus, &limits).unwrap().0 {
                    assert_eq!(vx + vy, *vz);
                    additions += 1;
                }
            }
        }
    }
    println!("order-3 code additions verified : {additions}");
    println!("pairs refused as overflow       : {overflows}");

    // The comparison predicate is the numeric order on codes.
    let lt = gen::gen_lt_for(1, 3, "X", "Y");
    let mut below = 0;
    for (x, vx) in &rels {
        for (y, vy) in &rels {
            let mut env = Environment::new();
            env.insert("X".into(), x.clone());
            env.insert("Y".into(), y.clone());
            if eval(&s, &env, &lt, &limits).unwrap().0 {
                assert!(vx < vy);
                below += 1;
            }
        }
    }
    println!("ordered pairs among 16 relations: {below} (= 16*15/2)");
}
