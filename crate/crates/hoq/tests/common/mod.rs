//! Shared fixtures: the corpus of formulas driving the normal-form and
//! equivalence suites.

use hoq::formula::Formula;
use hoq::parse::{parse_formula, parse_type};
use hoq::structure::Vocabulary;

// Each test binary compiles its own copy; not every binary reads every
// field.
#[allow(dead_code)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub vocab: Vocabulary,
    pub formula: Formula,
    /// Largest universe the equivalence oracle sweeps for this entry.
    pub max_n: u64,
}

fn vocab(pairs: &[(&str, &str)]) -> Vocabulary {
    Vocabulary::new(
        pairs
            .iter()
            .map(|(n, t)| (n.to_string(), parse_type(t).unwrap()))
            .collect(),
    )
    .unwrap()
}

/// The corpus: mixed connectives, quantifier orders up to three, sugar,
/// and all operator families. Order-three entries cap the oracle at
/// universe size two; the rest sweep up to three.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, pairs: &[(&str, &str)], text: &str, max_n: u64| {
        let v = vocab(pairs);
        let f = parse_formula(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            hoq::typecheck::typecheck(&f, &v).is_ok(),
            "{name} fails to typecheck"
        );
        out.push(CorpusEntry {
            name,
            vocab: v,
            formula: f,
            max_n,
        });
    };

    let p = [("P", "(i)")];
    let pq = [("P", "(i)"), ("Q", "(i)")];
    let e = [("E", "(i,i)")];
    let ec = [("E", "(i,i)"), ("c", "i"), ("d", "i")];
    let lt = [("<", "(i,i)")];
    let pc = [("P", "(i)"), ("c", "i")];

    // First-order shapes: connectives, nesting, negation, equality.
    push("fo_exists_self", &[], "exists x:i. x = x", 3);
    push(
        "fo_forall_eq",
        &[],
        "forall x:i. forall y:i. x = y | !(x = y)",
        3,
    );
    push("fo_impl_chain", &p, "forall x:i. P(x) -> P(x)", 3);
    push(
        "fo_iff",
        &pq,
        "forall x:i. (P(x) <-> Q(x)) | P(x) | Q(x)",
        3,
    );
    push("fo_nested_neg", &p, "!(exists x:i. !P(x))", 3);
    push("fo_double_neg", &p, "!!(exists x:i. P(x))", 3);
    push(
        "fo_scope_mix",
        &pq,
        "(exists x:i. P(x)) & (forall x:i. Q(x) | !Q(x))",
        3,
    );
    push("fo_shadowing", &p, "forall x:i. exists x:i. P(x)", 3);
    push(
        "fo_three_deep",
        &e,
        "forall x:i. exists y:i. forall z:i. E(x,y) | !E(z,z)",
        3,
    );
    push(
        "fo_edge_swap",
        &e,
        "exists x:i. exists y:i. E(x,y) & !E(y,x)",
        3,
    );
    push("fo_constants", &ec, "E(c,d) | c = d", 3);
    push(
        "fo_mixed_matrix",
        &ec,
        "forall x:i. E(c,x) -> (exists y:i. E(x,y) & !(y = c))",
        3,
    );
    push(
        "fo_order_consts",
        &lt,
        "forall x:i. 0(x) -> !max(x) | !(exists y:i. y < x)",
        3,
    );
    push("fo_one_const", &lt, "exists x:i. 1(x) -> !0(x)", 3);
    push(
        "fo_ite",
        &pq,
        "forall x:i. if P(x) then Q(x) | !Q(x) else !P(x)",
        3,
    );

    // Second-order monadic and binary shapes.
    push(
        "so_exists_monadic",
        &[],
        "exists X:(i). forall x:i. X(x) | !X(x)",
        3,
    );
    push("so_card_two", &[], "exists X:(i). card=2(X)", 3);
    push(
        "so_card_le_zero",
        &[],
        "exists X:(i). card<=0(X) & forall x:i. !X(x)",
        3,
    );
    push("so_card_ge", &p, "card>=1(P:(i)) -> exists x:i. P(x)", 3);
    push(
        "so_subset",
        &pq,
        "exists X:(i). forall x:i. X(x) -> P(x) | Q(x)",
        3,
    );
    push(
        "so_pair_blocks",
        &p,
        "exists X:(i). forall Y:(i). exists x:i. X(x) | !Y(x) | P(x)",
        3,
    );
    push(
        "so_binary_diag",
        &[],
        "exists X:(i,i). forall x:i. X(x,x)",
        3,
    );
    push(
        "so_binary_then_fo",
        &e,
        "exists X:(i,i). forall x:i. forall y:i. X(x,y) -> E(x,y)",
        3,
    );
    push(
        "so_eq_reflexive",
        &[],
        "forall X:(i). exists Y:(i). X = Y",
        3,
    );
    push(
        "so_eq_ho",
        &[],
        "forall X:(i). forall Y:(i). X = Y | !(X = Y)",
        3,
    );
    push(
        "so_bot_top",
        &[],
        "exists X:(i). X = bot:(i) | X = top:(i)",
        3,
    );
    push(
        "so_mixed_arity",
        &[],
        "exists X:(i,i). exists Y:(i). forall x:i. forall y:i. X(x,y) -> Y(x)",
        3,
    );
    push(
        "so_increasing_pair",
        &[],
        "forall x:i. exists Y:(i). Y(x) & (forall z:i. Y(z) -> z = x)",
        3,
    );
    push(
        "so_leading_forall",
        &p,
        "forall X:(i). exists x:i. X(x) | P(x)",
        3,
    );
    push(
        "so_three_blocks",
        &[],
        "exists X:(i). forall Y:(i). exists Z:(i). forall x:i. X(x) | !Y(x) | Z(x)",
        2,
    );

    // Order-three shapes (universe capped at two).
    push(
        "ho3_exists",
        &[],
        "exists X:((i)). forall Y:(i). X(Y) | !X(Y)",
        2,
    );
    push(
        "ho3_alternation",
        &[],
        "exists X:((i)). forall Y:((i)). X = Y | !(X = Y)",
        2,
    );
    push(
        "ho3_membership",
        &[],
        "exists X:((i)). exists Y:(i). X(Y) & forall Z:(i). X(Z) -> Z = Y",
        2,
    );
    push(
        "ho3_chain_members",
        &[],
        "exists X:((i)). forall Y:(i). exists Z:(i). X(Y) -> X(Z) & Y = Z",
        2,
    );
    push(
        "ho3_fo_tail",
        &[],
        "exists X:((i)). forall Y:(i). exists y:i. Y(y) & (X(Y) | !X(Y))",
        2,
    );
    push(
        "ho3_decreasing_guard",
        &p,
        "exists Y:((i)). forall Z:(i). forall x:i. Y(Z) -> (Z(x) | P(x))",
        2,
    );
    push("ho3_card", &[], "exists X:((i)). card>=2(X)", 2);
    push(
        "ho3_bot",
        &[],
        "exists X:((i)). X(bot:(i)) | X = bot:((i))",
        2,
    );

    // Transitive closure.
    push("tc_path", &ec, "TC[x; y : E(x,y)](c; d)", 3);
    push("tc_reflexive", &ec, "TC[x; y : E(x,y)](c; c)", 3);
    push(
        "tc_negated",
        &ec,
        "!TC[x; y : E(x,y)](c; d) | TC[x; y : E(x,y)](c; d)",
        3,
    );
    push("tc_bot_top", &e, "TC[x; y : E(x,y)](bot:i; top:i)", 3);
    push(
        "tc_under_quant",
        &e,
        "forall u:i. exists v:i. TC[x; y : E(x,y)](u; v)",
        3,
    );
    push(
        "tc_monadic",
        &pc,
        "TC[X:(i); Y:(i) : forall x:i. Y(x) -> X(x) | P(x)](bot:(i); top:(i)) | P(c)",
        2,
    );

    // Deterministic fixed points.
    push("pfp_flip", &pc, "PFP[R, x:i : !R(x)](c)", 3);
    push("pfp_identity", &pc, "PFP[R, x:i : R(x)](c)", 3);
    push("pfp_fill", &pc, "PFP[R, x:i : x = x](c)", 3);
    push(
        "ifp_seed",
        &ec,
        "IFP[R, x:i : x = c | exists w:i. R(w) & E(w,x)](d)",
        3,
    );
    push("ifp_empty", &pc, "IFP[R, x:i : !(x = x)](c)", 3);
    push(
        "ifp_under_connective",
        &ec,
        "IFP[R, x:i : x = c | exists w:i. R(w) & E(w,x)](d) & (c = d | !(c = d))",
        3,
    );
    push(
        "pfp_monadic_stage",
        &pc,
        "PFP[R, X:(i) : forall x:i. X(x) -> R(X)](top:(i))",
        2,
    );

    // Nondeterministic and alternating fixed points.
    push(
        "npfp_two_seeds",
        &ec,
        "NPFP[R, x:i : R(x) | x = c ; R(x) | x = d](d)",
        3,
    );
    push("npfp_flip_flip", &pc, "NPFP[R, x:i : !R(x) ; !R(x)](c)", 3);
    push("nifp_joint", &ec, "NIFP[R, x:i : x = c ; x = d](c)", 3);
    push("apfp_fixed_bottom", &pc, "APFP[R, x:i : R(x) ; R(x)](c)", 3);
    push(
        "apfp_two_bodies",
        &ec,
        "APFP[R, x:i : R(x) | x = c ; R(x) | x = d](c)",
        3,
    );
    push("aifp_seed", &ec, "AIFP[R, x:i : x = c ; x = d](d)", 3);

    out
}
