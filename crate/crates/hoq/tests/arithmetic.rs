//! The bridge between the generated arithmetic predicates and integer
//! arithmetic on code values: evaluating a generated formula with
//! relations bound must agree with computing on `value(encode(...))`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use hoq::encode::{enumerate_relations, value};
use hoq::eval::{eval, Environment};
use hoq::formula::Formula;
use hoq::gen;
use hoq::limits::Limits;
use hoq::relation::RelationValue;
use hoq::structure::{Structure, Vocabulary};
use hoq::typecheck::typecheck;
use hoq::types::TypeExpr;

fn lim() -> Limits {
    Limits::default()
}

/// A structure over `n` elements whose `<` is the natural order.
fn ordered(n: u64) -> Structure {
    let mut lt = Vec::new();
    for x in 0..n {
        for y in x + 1..n {
            lt.push(vec![RelationValue::Element(x), RelationValue::Element(y)]);
        }
    }
    Structure::new(n)
        .unwrap()
        .with("<", RelationValue::set(TypeExpr::uniform(2, 2), lt))
}

fn lt_vocab() -> Vocabulary {
    Vocabulary::new(vec![("<".into(), TypeExpr::uniform(2, 2))]).unwrap()
}

fn eval_with(s: &Structure, env: &Environment, f: &Formula) -> bool {
    eval(s, env, f, &lim()).unwrap().0
}

fn relations(a: usize, r: u32, n: u64) -> Vec<(RelationValue, u64)> {
    enumerate_relations(&TypeExpr::uniform(a, r), n, &lim())
        .unwrap()
        .map(|rel| {
            let v = value(&rel, n, &lim()).unwrap().to_u64().unwrap();
            (rel, v)
        })
        .collect()
}

#[test]
fn eq_matches_set_equality_exhaustively() {
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_eq_for(1, r, "X", "Y");
        let rels = relations(1, r, n);
        for (x, vx) in &rels {
            for (y, vy) in &rels {
                let mut env = Environment::new();
                env.insert("X".into(), x.clone());
                env.insert("Y".into(), y.clone());
                assert_eq!(eval_with(&s, &env, &f), vx == vy, "eq r={r} {vx} {vy}");
            }
        }
    }
}

#[test]
fn lt_matches_integer_comparison_exhaustively() {
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_lt_for(1, r, "X", "Y");
        let rels = relations(1, r, n);
        for (x, vx) in &rels {
            for (y, vy) in &rels {
                let mut env = Environment::new();
                env.insert("X".into(), x.clone());
                env.insert("Y".into(), y.clone());
                assert_eq!(eval_with(&s, &env, &f), vx < vy, "lt r={r} {vx} {vy}");
            }
        }
    }
}

#[test]
fn lt_is_irreflexive() {
    let s = ordered(2);
    let f = gen::gen_lt_for(1, 2, "X", "X");
    for (x, _) in relations(1, 2, 2) {
        let mut env = Environment::new();
        env.insert("X".into(), x);
        assert!(!eval_with(&s, &env, &f));
    }
}

#[test]
fn bit_matches_code_bits() {
    // bit(R, S) agrees with the code of R at the position named by S.
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_bit(1, r);
        let rels = relations(1, r, n);
        let positions = relations(1, r - 1, n);
        for (rel, _) in &rels {
            let code = hoq::encode::encode(rel, n, &lim()).unwrap();
            for (pos, vpos) in &positions {
                let mut env = Environment::new();
                env.insert("R".into(), rel.clone());
                env.insert("S0".into(), pos.clone());
                let expect = code.bits[*vpos as usize];
                assert_eq!(eval_with(&s, &env, &f), expect, "bit r={r} pos={vpos}");
            }
        }
    }
}

#[test]
fn bit_of_empty_is_zero() {
    let n = 2;
    let s = ordered(n);
    let f = gen::gen_bit(1, 2);
    let empty = RelationValue::empty(TypeExpr::monadic(2));
    for (pos, _) in relations(1, 1, n) {
        let mut env = Environment::new();
        env.insert("R".into(), empty.clone());
        env.insert("S0".into(), pos);
        assert!(!eval_with(&s, &env, &f));
    }
}

#[test]
fn plus_matches_exact_addition_exhaustively() {
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_plus_for(1, r, "X", "Y", "Z");
        let rels = relations(1, r, n);
        let size = rels.len() as u64;
        for (x, vx) in &rels {
            for (y, vy) in &rels {
                for (z, vz) in &rels {
                    let mut env = Environment::new();
                    env.insert("X".into(), x.clone());
                    env.insert("Y".into(), y.clone());
                    env.insert("Z".into(), z.clone());
                    let expect = vx + vy < size && vx + vy == *vz;
                    assert_eq!(
                        eval_with(&s, &env, &f),
                        expect,
                        "plus r={r}: {vx}+{vy}={vz}"
                    );
                }
            }
        }
    }
}

#[test]
fn overflow_matches_range_exhaustively() {
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_overflow_for(1, r, "X", "Y");
        let rels = relations(1, r, n);
        let size = rels.len() as u64;
        for (x, vx) in &rels {
            for (y, vy) in &rels {
                let mut env = Environment::new();
                env.insert("X".into(), x.clone());
                env.insert("Y".into(), y.clone());
                assert_eq!(
                    eval_with(&s, &env, &f),
                    vx + vy >= size,
                    "overflow r={r}: {vx}+{vy}"
                );
            }
        }
    }
}

#[test]
fn plus_mod_matches_wrapped_addition_exhaustively() {
    for r in 2..=3u32 {
        let n = 2;
        let s = ordered(n);
        let f = gen::gen_plus_mod_for(1, r, "X", "Y", "Z");
        let rels = relations(1, r, n);
        let size = rels.len() as u64;
        for (x, vx) in &rels {
            for (y, vy) in &rels {
                for (z, vz) in &rels {
                    let mut env = Environment::new();
                    env.insert("X".into(), x.clone());
                    env.insert("Y".into(), y.clone());
                    env.insert("Z".into(), z.clone());
                    let expect = (vx + vy) % size == *vz;
                    assert_eq!(
                        eval_with(&s, &env, &f),
                        expect,
                        "plus_mod r={r}: {vx}+{vy}={vz} mod {size}"
                    );
                }
            }
        }
    }
}

#[test]
fn plus_functionality_and_plus_mod_totality() {
    let n = 2;
    let s = ordered(n);
    let plus = gen::gen_plus_for(1, 2, "X", "Y", "Z");
    let plus_mod = gen::gen_plus_mod_for(1, 2, "X", "Y", "Z");
    let overflow = gen::gen_overflow_for(1, 2, "X", "Y");
    let rels = relations(1, 2, n);
    for (x, _) in &rels {
        for (y, _) in &rels {
            let mut env = Environment::new();
            env.insert("X".into(), x.clone());
            env.insert("Y".into(), y.clone());
            let overflows = eval_with(&s, &env, &overflow);
            let mut exact = 0;
            let mut wrapped = 0;
            for (z, _) in &rels {
                env.insert("Z".into(), z.clone());
                if eval_with(&s, &env, &plus) {
                    exact += 1;
                }
                if eval_with(&s, &env, &plus_mod) {
                    wrapped += 1;
                }
            }
            assert_eq!(exact, if overflows { 0 } else { 1 });
            assert_eq!(wrapped, 1);
        }
    }
}

#[test]
fn generated_predicates_typecheck() {
    let vocab = lt_vocab();
    let mono = |r| TypeExpr::uniform(1, r);
    for r in 2..=3u32 {
        let with_xyz = vocab
            .with_symbol("X", mono(r))
            .unwrap()
            .with_symbol("Y", mono(r))
            .unwrap()
            .with_symbol("Z", mono(r))
            .unwrap();
        assert!(typecheck(&gen::gen_eq(1, r), &with_xyz).is_ok());
        assert!(typecheck(&gen::gen_lt(1, r), &with_xyz).is_ok());
        assert!(typecheck(&gen::gen_plus(1, r), &with_xyz).is_ok());
        assert!(typecheck(&gen::gen_overflow(1, r), &with_xyz).is_ok());
        assert!(typecheck(&gen::gen_plus_mod(1, r), &with_xyz).is_ok());
        let with_bit = with_xyz
            .with_symbol("R", mono(r))
            .unwrap()
            .with_symbol("S0", mono(r - 1))
            .unwrap();
        assert!(typecheck(&gen::gen_bit(1, r), &with_bit).is_ok());
    }
    // Tuple addition at a = 2.
    let ty = TypeExpr::uniform(2, 2);
    let mut v = vocab.clone();
    for base in ["X", "Y", "Z"] {
        for i in 0..2 {
            v = v.with_symbol(format!("{base}{i}"), ty.clone()).unwrap();
        }
    }
    assert!(typecheck(&gen::gen_plus_tuple(2, 2), &v).is_ok());
}

#[test]
fn plus_tuple_matches_two_digit_addition() {
    // a = 2, r = 2, n = 2: digits range over [0, 16); a pair codes a
    // two-digit base-16 number, first digit most significant.
    let n = 2;
    let s = ordered(n);
    let f = gen::gen_plus_tuple_for(
        2,
        2,
        &["X0".into(), "X1".into()],
        &["Y0".into(), "Y1".into()],
        &["Z0".into(), "Z1".into()],
    );
    let rels = relations(2, 2, n);
    let p = rels.len() as u64;
    assert_eq!(p, 16);
    let by_value: Vec<RelationValue> = rels.iter().map(|(rel, _)| rel.clone()).collect();

    // A structured digit grid covering no-carry, carry creation, and
    // carry propagation through a digit summing to exactly p - 1.
    let digits: &[u64] = &[0, 1, 2, 7, 8, 14, 15];
    let mut checked = 0u64;
    for &x1 in digits {
        for &x0 in digits {
            for &y1 in digits {
                for &y0 in digits {
                    let vx = x1 * p + x0;
                    let vy = y1 * p + y0;
                    let vz = (vx + vy) % (p * p);
                    let (z1, z0) = (vz / p, vz % p);
                    let mut env = Environment::new();
                    env.insert("X0".into(), by_value[x1 as usize].clone());
                    env.insert("X1".into(), by_value[x0 as usize].clone());
                    env.insert("Y0".into(), by_value[y1 as usize].clone());
                    env.insert("Y1".into(), by_value[y0 as usize].clone());
                    env.insert("Z0".into(), by_value[z1 as usize].clone());
                    env.insert("Z1".into(), by_value[z0 as usize].clone());
                    assert!(
                        eval_with(&s, &env, &f),
                        "plus_tuple: {vx}+{vy}={vz} (digits {x1},{x0} + {y1},{y0})"
                    );
                    // A wrong low digit must be rejected.
                    if checked.is_multiple_of(7) {
                        env.insert("Z1".into(), by_value[((z0 + 1) % p) as usize].clone());
                        assert!(!eval_with(&s, &env, &f), "plus_tuple rejects {vx}+{vy}");
                    }
                    checked += 1;
                }
            }
        }
    }
    assert_eq!(checked, (digits.len() as u64).pow(4));
    let _ = BigUint::from(0u32);
}

#[test]
fn order_constants_have_unique_witnesses_on_every_total_order() {
    // 0(x) and max(x) pick exactly one element under any strict total
    // order, for universes up to four; 1(x) exactly one when n >= 2.
    fn permutations(n: u64) -> Vec<Vec<u64>> {
        if n == 1 {
            return vec![vec![0]];
        }
        let mut out = Vec::new();
        for rest in permutations(n - 1) {
            for slot in 0..=rest.len() {
                let mut next = rest.clone();
                next.insert(slot, n - 1);
                out.push(next);
            }
        }
        out
    }
    for n in 1..=4u64 {
        for perm in permutations(n) {
            // perm[k] is the element of rank k.
            let mut pairs = Vec::new();
            for lo in 0..n as usize {
                for hi in lo + 1..n as usize {
                    pairs.push(vec![
                        RelationValue::Element(perm[lo]),
                        RelationValue::Element(perm[hi]),
                    ]);
                }
            }
            let s = Structure::new(n)
                .unwrap()
                .with("<", RelationValue::set(TypeExpr::uniform(2, 2), pairs));
            let count = |text: &str| {
                let f = hoq::parse::parse_formula(text).unwrap();
                (0..n)
                    .filter(|&e| {
                        let mut env = Environment::new();
                        env.insert("v".into(), RelationValue::Element(e));
                        eval(&s, &env, &f, &lim()).unwrap().0
                    })
                    .count()
            };
            assert_eq!(count("0(v)"), 1, "n={n} perm={perm:?}");
            assert_eq!(count("max(v)"), 1, "n={n} perm={perm:?}");
            assert_eq!(count("1(v)"), usize::from(n >= 2), "n={n} perm={perm:?}");
        }
    }
}
