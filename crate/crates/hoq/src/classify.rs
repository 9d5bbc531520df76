//! Fragment classification: quantified order, alternation depth, free
//! order, and shape flags.

use serde::Serialize;

use crate::formula::{Formula, QuantKind};
use crate::normalize::{is_prenex, order_blocks, to_pnf};
use crate::structure::Vocabulary;
use crate::types::TypeExpr;

/// Where a formula sits in the quantified-order hierarchy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentReport {
    /// Largest order among quantified variables; 0 when quantifier free.
    pub max_quantified_order: u32,
    /// Top-order alternation blocks counted on the formula as written.
    pub alternation_blocks: usize,
    /// The same count after prefix normalization, which is where block
    /// structure is actually defined.
    pub alternation_blocks_prenex: usize,
    /// True when the first top-order block is universal (the co-class).
    pub leading_universal: bool,
    /// Largest order among the free symbols used.
    pub max_free_order: u32,
    /// Every quantified or operator-bound relation lies on the monadic
    /// chain.
    pub monadic: bool,
    pub prenex: bool,
    pub operator_free: bool,
}

fn quantified_types(f: &Formula, out: &mut Vec<TypeExpr>) {
    match f {
        Formula::Quant { ty, .. } => out.push(ty.clone()),
        Formula::Tc { xs, ys, .. } => out.extend(xs.iter().chain(ys).map(|b| b.ty.clone())),
        Formula::Fix { xs, .. } | Formula::NFix { xs, .. } | Formula::AFix { xs, .. } => {
            out.push(TypeExpr::Tuple(xs.iter().map(|b| b.ty.clone()).collect()))
        }
        _ => {}
    }
    for sub in f.subformulas() {
        quantified_types(sub, out);
    }
}

/// Block count over the raw pre-order sequence of quantifier kinds at
/// order `r`; meaningful as written, exact after prenexing.
fn raw_blocks(f: &Formula, r: u32) -> (usize, bool) {
    fn kinds(f: &Formula, r: u32, out: &mut Vec<QuantKind>) {
        if let Formula::Quant { kind, ty, .. } = f {
            if ty.order() == r {
                out.push(*kind);
            }
        }
        for sub in f.subformulas() {
            kinds(sub, r, out);
        }
    }
    let mut ks = Vec::new();
    kinds(f, r, &mut ks);
    let mut blocks = 0;
    let mut last = None;
    for k in &ks {
        if last != Some(*k) {
            blocks += 1;
            last = Some(*k);
        }
    }
    (blocks, ks.first() == Some(&QuantKind::Forall))
}

/// Computes the fragment report for a well-typed formula.
pub fn classify(f: &Formula, vocab: &Vocabulary) -> FragmentReport {
    let mut bound = Vec::new();
    quantified_types(f, &mut bound);
    let r = bound.iter().map(TypeExpr::order).max().unwrap_or(0);

    let (raw, _) = if r > 0 { raw_blocks(f, r) } else { (0, false) };
    let (prenex_blocks, leading_universal) = if r > 0 {
        let renamed = crate::formula::alpha_rename(f);
        order_blocks(&to_pnf(r, &renamed), r)
    } else {
        (0, false)
    };

    let free = f.free_names();
    let max_free_order = free
        .iter()
        .filter_map(|name| vocab.get(name))
        .map(TypeExpr::order)
        .max()
        .unwrap_or(0);

    FragmentReport {
        max_quantified_order: r,
        alternation_blocks: raw,
        alternation_blocks_prenex: prenex_blocks,
        leading_universal,
        max_free_order,
        monadic: bound.iter().all(TypeExpr::is_monadic_chain),
        prenex: is_prenex(f),
        operator_free: f.operator_free(),
    }
}
