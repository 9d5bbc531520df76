//! The counting lemma and the codec bijection over the desk-scale grid,
//! plus property-based invariants for the codec.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use proptest::prelude::*;

use hoq::encode::{canonical_compare, counts, decode_with, encode, enumerate_relations, value};
use hoq::limits::Limits;
use hoq::relation::{enumerate_tuples, RelationValue};
use hoq::types::TypeExpr;

fn lim() -> Limits {
    Limits::default()
}

/// The acceptance grid: orders up to three with universe two, orders up to
/// two with universe three, arities up to two throughout.
fn grid() -> Vec<(u32, usize, u64)> {
    let mut out = Vec::new();
    for r in 1..=3u32 {
        for a in 1..=2usize {
            for n in 1..=2u64 {
                out.push((r, a, n));
            }
        }
    }
    for r in 1..=2u32 {
        for a in 1..=2usize {
            out.push((r, a, 3));
        }
    }
    out
}

/// Structured sample relations of a type: empty, full-ish slices, and
/// singletons, for points too large to enumerate.
fn sample_relations(ty: &TypeExpr, n: u64, limits: &Limits) -> Vec<RelationValue> {
    let children = ty.children().to_vec();
    let tuples = enumerate_tuples(&children, n, limits).unwrap();
    let mut out = vec![RelationValue::empty(ty.clone())];
    out.push(RelationValue::set(ty.clone(), tuples.clone()));
    for (i, t) in tuples.iter().enumerate().step_by(17.max(tuples.len() / 13)) {
        out.push(RelationValue::set(ty.clone(), vec![t.clone()]));
        let _ = i;
    }
    let half: Vec<_> = tuples.iter().step_by(2).cloned().collect();
    out.push(RelationValue::set(ty.clone(), half));
    out
}

#[test]
fn counting_lemma_matches_enumeration_on_the_grid() {
    let start = std::time::Instant::now();
    for (r, a, n) in grid() {
        let report = counts(r, a, n, &lim()).unwrap();
        let ty = TypeExpr::uniform(a, r);
        if r == 1 {
            // Order one: values are elements; tuples are element tuples.
            let rels: Vec<_> = enumerate_relations(&ty, n, &lim()).unwrap().collect();
            assert_eq!(
                BigUint::from(rels.len()),
                report.relations,
                "N(1,{a}) n={n}"
            );
            let tuples = enumerate_tuples(&vec![TypeExpr::Iota; a], n, &lim()).unwrap();
            assert_eq!(BigUint::from(tuples.len()), report.tuples, "T(1,{a}) n={n}");
            continue;
        }
        // The number of member tuples available to a relation must equal
        // the stated maximum cardinality.
        let child = TypeExpr::uniform(a, r - 1);
        let member_space = enumerate_tuples(&vec![child; a], n, &lim()).unwrap();
        let c = report.max_cardinality.clone().unwrap();
        assert_eq!(BigUint::from(member_space.len()), c, "C({r},{a}) n={n}");
        assert_eq!(report.code_bits, c, "B = C at ({r},{a},{n})");
        let n_exact = BigUint::one() << c.to_u64().unwrap() as usize;
        assert_eq!(report.relations, n_exact, "N = 2^C at ({r},{a},{n})");
        assert_eq!(
            report.tuples,
            report.relations.pow(a as u32),
            "T = N^a at ({r},{a},{n})"
        );
        // Where the relation space is enumerable, count it directly.
        if report.relations <= BigUint::from(1u64 << 16) {
            let rels: Vec<_> = enumerate_relations(&ty, n, &lim()).unwrap().collect();
            assert_eq!(BigUint::from(rels.len()), report.relations, "({r},{a},{n})");
        }
    }
    assert!(start.elapsed().as_secs() < 10, "criterion budget exceeded");
}

#[test]
fn codec_bijection_on_the_grid() {
    let start = std::time::Instant::now();
    for (r, a, n) in grid() {
        let ty = TypeExpr::uniform(a, r);
        let report = counts(r, a, n, &lim()).unwrap();
        if r == 1 {
            for e in 0..n {
                let rel = RelationValue::Element(e);
                let code = encode(&rel, n, &lim()).unwrap();
                assert_eq!(BigUint::from(code.bits.len()), report.code_bits);
                assert_eq!(decode_with(&code, &lim()).unwrap(), rel);
            }
            continue;
        }
        if report.relations <= BigUint::from(1u64 << 16) {
            for rel in enumerate_relations(&ty, n, &lim()).unwrap() {
                let code = encode(&rel, n, &lim()).unwrap();
                assert_eq!(
                    BigUint::from(code.bits.len()),
                    report.code_bits,
                    "length at ({r},{a},{n})"
                );
                assert_eq!(decode_with(&code, &lim()).unwrap(), rel, "({r},{a},{n})");
            }
        } else {
            // The 2^256-relation point: exact length plus structured
            // samples.
            for rel in sample_relations(&ty, n, &lim()) {
                let code = encode(&rel, n, &lim()).unwrap();
                assert_eq!(BigUint::from(code.bits.len()), report.code_bits);
                assert_eq!(decode_with(&code, &lim()).unwrap(), rel);
            }
        }
    }
    assert!(start.elapsed().as_secs() < 10, "criterion budget exceeded");
}

#[test]
fn enumeration_is_strictly_increasing_with_no_repeats() {
    for (ty, n) in [
        (TypeExpr::monadic(2), 3u64),
        (TypeExpr::monadic(3), 2),
        (TypeExpr::uniform(2, 2), 2),
        (TypeExpr::uniform(2, 2), 3),
    ] {
        let rels: Vec<_> = enumerate_relations(&ty, n, &lim()).unwrap().collect();
        for pair in rels.windows(2) {
            assert_eq!(
                canonical_compare(&pair[0], &pair[1]).unwrap(),
                std::cmp::Ordering::Less
            );
        }
        // Values are exactly 0..len in order.
        for (i, rel) in rels.iter().enumerate() {
            assert_eq!(value(rel, n, &lim()).unwrap(), BigUint::from(i));
        }
    }
}

#[test]
fn canonical_order_agrees_with_value_comparison() {
    // The bridge invariant: comparing relations equals comparing the
    // numbers their codes denote.
    let ty = TypeExpr::monadic(3);
    let rels: Vec<_> = enumerate_relations(&ty, 2, &lim()).unwrap().collect();
    for x in &rels {
        for y in &rels {
            let by_order = canonical_compare(x, y).unwrap();
            let by_value = value(x, 2, &lim())
                .unwrap()
                .cmp(&value(y, 2, &lim()).unwrap());
            assert_eq!(by_order, by_value);
        }
    }
}

proptest! {
    #[test]
    fn round_trip_binary_relations_any_universe(n in 1u64..=4, mask in 0u32..65536) {
        let ty = TypeExpr::uniform(2, 2);
        let mut tuples = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if (mask >> ((i * n + j) % 32)) & 1 == 1 {
                    tuples.push(vec![RelationValue::Element(i), RelationValue::Element(j)]);
                }
            }
        }
        let rel = RelationValue::set(ty, tuples);
        let code = encode(&rel, n, &lim()).unwrap();
        prop_assert_eq!(code.bits.len() as u64, n * n);
        prop_assert_eq!(decode_with(&code, &lim()).unwrap(), rel);
    }

    #[test]
    fn value_is_monotone_under_insertion(n in 2u64..=3, e in 0u64..3) {
        let e = e % n;
        let empty = RelationValue::empty(TypeExpr::monadic(2));
        let single = RelationValue::set(
            TypeExpr::monadic(2),
            vec![vec![RelationValue::Element(e)]],
        );
        prop_assert!(value(&empty, n, &lim()).unwrap() < value(&single, n, &lim()).unwrap());
    }
}

#[test]
fn decode_then_encode_is_identity_on_all_codes() {
    // The converse bijection direction: every bit string of the right
    // length names a relation whose code is itself.
    use hoq::encode::BitCode;
    for (ty, n, len) in [
        (TypeExpr::monadic(2), 2u64, 2usize),
        (TypeExpr::monadic(3), 2, 4),
        (TypeExpr::uniform(2, 2), 2, 4),
    ] {
        for mask in 0..(1u32 << len) {
            let bits: String = (0..len)
                .map(|i| if (mask >> i) & 1 == 1 { '1' } else { '0' })
                .collect();
            let code = BitCode::from_str_bits(&bits, ty.clone(), n).unwrap();
            let rel = decode_with(&code, &lim()).unwrap();
            assert_eq!(encode(&rel, n, &lim()).unwrap().to_string(), bits);
        }
    }
    // At type i the high codes are invalid when n is not a power of two.
    use hoq::error::CodecError;
    let bad = BitCode::from_str_bits("11", TypeExpr::Iota, 3).unwrap();
    assert!(matches!(
        decode_with(&bad, &lim()),
        Err(CodecError::DecodeOutOfRange { .. })
    ));
    let good = BitCode::from_str_bits("10", TypeExpr::Iota, 3).unwrap();
    assert_eq!(
        decode_with(&good, &lim()).unwrap(),
        RelationValue::Element(2)
    );
}
