//! Property-based invariants: printing then parsing is the identity on
//! formulas, and the structure loader accepts exactly the documents that
//! satisfy the value invariants.

mod common;

use proptest::prelude::*;

use hoq::formula::{alpha_rename, Binder, FixKind, Formula, QuantKind, Term};
use hoq::parse::parse_formula;
use hoq::print::print_formula;
use hoq::structure::structure_from_str;
use hoq::types::TypeExpr;

#[test]
fn corpus_round_trips_exactly() {
    for entry in common::corpus() {
        let printed = print_formula(&entry.formula);
        let back = parse_formula(&printed)
            .unwrap_or_else(|e| panic!("{}: reparse failed: {e}\n{printed}", entry.name));
        assert_eq!(back, entry.formula, "{}: {printed}", entry.name);
    }
}

#[test]
fn alpha_renamed_corpus_round_trips() {
    for entry in common::corpus() {
        let renamed = alpha_rename(&entry.formula);
        let printed = print_formula(&renamed);
        assert_eq!(parse_formula(&printed).unwrap(), renamed, "{}", entry.name);
    }
}

fn arb_type() -> impl Strategy<Value = TypeExpr> {
    let leaf = Just(TypeExpr::Iota);
    leaf.prop_recursive(3, 8, 3, |inner| {
        prop::collection::vec(inner, 1..3).prop_map(TypeExpr::Tuple)
    })
}

fn arb_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,3}".prop_filter("keywords excluded", |s| {
        !matches!(
            s.as_str(),
            "exists" | "forall" | "bot" | "top" | "card" | "if" | "then" | "else" | "max" | "i"
        )
    })
}

fn arb_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        arb_name().prop_map(Term::Var),
        arb_type().prop_map(Term::Bot),
        arb_type().prop_map(Term::Top),
    ]
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (arb_name(), prop::collection::vec(arb_term(), 1..3))
            .prop_map(|(head, args)| Formula::Apply { head, args }),
        (arb_term(), arb_term(), prop::option::of(arb_type())).prop_map(
            |(lhs, rhs, ascription)| Formula::Equal {
                lhs,
                rhs,
                ascription
            }
        ),
    ];
    atom.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Formula::Or),
            inner.clone().prop_map(|f| f.not()),
            (prop::bool::ANY, arb_name(), arb_type(), inner.clone()).prop_map(
                |(ex, var, ty, body)| Formula::Quant {
                    kind: if ex {
                        QuantKind::Exists
                    } else {
                        QuantKind::Forall
                    },
                    var,
                    ty,
                    body: Box::new(body),
                }
            ),
            (
                arb_name(),
                arb_name(),
                arb_type(),
                inner.clone(),
                arb_term(),
                arb_term()
            )
                .prop_map(|(x, y, ty, body, from, to)| Formula::Tc {
                    xs: vec![Binder::new(x, ty.clone())],
                    ys: vec![Binder::new(y, ty)],
                    body: Box::new(body),
                    from: vec![from],
                    to: vec![to],
                }),
            (arb_name(), arb_name(), arb_type(), inner, arb_term()).prop_map(
                |(pred, x, ty, body, arg)| Formula::Fix {
                    kind: FixKind::Pfp,
                    pred,
                    xs: vec![Binder::new(x, ty)],
                    body: Box::new(body),
                    args: vec![arg],
                }
            ),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(f in arb_formula()) {
        let printed = print_formula(&f);
        let back = parse_formula(&printed);
        prop_assert_eq!(back.as_ref().ok(), Some(&f), "through {}", printed);
    }

    #[test]
    fn parse_errors_always_carry_in_range_spans(
        text in "[a-zA-Z0-9 ():;,.!&|<>=\\[\\]-]{0,40}"
    ) {
        match parse_formula(&text) {
            Ok(_) => {}
            Err(e) => {
                prop_assert!(e.span.start <= text.len());
                prop_assert!(e.span.end <= text.len() + 1);
            }
        }
    }
}

// Structure-document fuzzing: mutations that violate the invariants must
// be rejected; harmless mutations must be accepted.
const BASE: &str = r#"{
    "universe": 3,
    "vocabulary": {"E": "(i,i)", "P": "(i)", "c": "i"},
    "interpretation": {"E": [[0,1],[1,2]], "P": [[2]], "c": 1}
}"#;

#[test]
fn loader_accepts_the_base_document() {
    let (vocab, s) = structure_from_str(BASE).unwrap();
    assert_eq!(vocab.len(), 3);
    assert_eq!(s.universe, 3);
}

#[test]
fn loader_rejects_each_invariant_violation() {
    let violations = [
        // element at or beyond the universe
        r#"{"universe":3,"vocabulary":{"E":"(i,i)"},"interpretation":{"E":[[0,3]]}}"#,
        // arity mismatch
        r#"{"universe":3,"vocabulary":{"E":"(i,i)"},"interpretation":{"E":[[0,1,2]]}}"#,
        // nesting too shallow for the declared type
        r#"{"universe":3,"vocabulary":{"X":"((i))"},"interpretation":{"X":[[0]]}}"#,
        // constant interpreted by a tuple
        r#"{"universe":3,"vocabulary":{"c":"i"},"interpretation":{"c":[0]}}"#,
        // undeclared symbol interpreted
        r#"{"universe":3,"vocabulary":{},"interpretation":{"E":[[0,1]]}}"#,
        // declared symbol with no interpretation
        r#"{"universe":3,"vocabulary":{"E":"(i,i)"},"interpretation":{}}"#,
        // empty universe
        r#"{"universe":0,"vocabulary":{},"interpretation":{}}"#,
        // unparsable type string
        r#"{"universe":3,"vocabulary":{"E":"pair"},"interpretation":{"E":[[0,1]]}}"#,
        // malformed document
        r#"{"universe":3"#,
        // negative element
        r#"{"universe":3,"vocabulary":{"c":"i"},"interpretation":{"c":-1}}"#,
    ];
    for text in violations {
        assert!(structure_from_str(text).is_err(), "accepted: {text}");
    }
}

#[test]
fn loader_accepts_harmless_mutations() {
    // Reordered and duplicated tuples name the same set.
    let shuffled = r#"{
        "universe": 3,
        "vocabulary": {"E": "(i,i)", "P": "(i)", "c": "i"},
        "interpretation": {"E": [[1,2],[0,1],[1,2]], "P": [[2]], "c": 1}
    }"#;
    let (_, a) = structure_from_str(BASE).unwrap();
    let (_, b) = structure_from_str(shuffled).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn loader_never_accepts_out_of_range_elements(e in 3u64..100) {
        let text = format!(
            r#"{{"universe":3,"vocabulary":{{"P":"(i)"}},"interpretation":{{"P":[[{e}]]}}}}"#
        );
        prop_assert!(structure_from_str(&text).is_err());
    }

    #[test]
    fn loader_round_trips_arbitrary_binary_relations(
        n in 1u64..4,
        pairs in prop::collection::vec((0u64..4, 0u64..4), 0..8)
    ) {
        let tuples: Vec<Vec<u64>> = pairs
            .into_iter()
            .filter(|(a, b)| *a < n && *b < n)
            .map(|(a, b)| vec![a, b])
            .collect();
        let doc = serde_json::json!({
            "universe": n,
            "vocabulary": {"E": "(i,i)"},
            "interpretation": {"E": tuples},
        });
        let (vocab, s) = structure_from_str(&doc.to_string()).unwrap();
        let printed = hoq::structure::structure_to_string(&vocab, &s);
        let (vocab2, s2) = structure_from_str(&printed).unwrap();
        prop_assert_eq!(vocab, vocab2);
        prop_assert_eq!(s, s2);
    }
}
