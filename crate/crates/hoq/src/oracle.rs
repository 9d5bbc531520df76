//! Brute-force reference implementations for property testing: structure
//! enumeration, semantic equivalence, and the strategy-function reading of
//! the alternating fixed point.

use rayon::prelude::*;

use crate::error::EvalError;
use crate::eval::{eval_closed, inflationary, Environment, Evaluator};
use crate::formula::{AFixKind, Binder, Formula, Term};
use crate::limits::Limits;
use crate::relation::{enumerate_values, guarded_value_count, RelationValue, Tuple};
use crate::structure::{Structure, Vocabulary};
use crate::types::TypeExpr;

/// Outcome of an equivalence check; a counterexample is present exactly
/// when the formulas disagree somewhere.
#[derive(Debug, Clone)]
pub struct EquivalenceVerdict {
    pub equivalent: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub structure: Structure,
    pub lhs: bool,
    pub rhs: bool,
}

/// Every structure over the vocabulary with universe `[0, n)`, exactly
/// once, in a deterministic order: the first symbol varies slowest.
pub fn enumerate_structures(
    vocab: &Vocabulary,
    n: u64,
    limits: &Limits,
) -> Result<Vec<Structure>, EvalError> {
    let mut per_symbol: Vec<(String, Vec<RelationValue>)> = Vec::new();
    let mut total: u64 = 1;
    for (name, ty) in vocab.iter() {
        let values = enumerate_values(ty, n, limits)?;
        total = total.checked_mul(values.len() as u64).ok_or_else(|| {
            EvalError::SearchSpaceTooLarge {
                what: format!("structures over {} symbols", vocab.len()),
                size: "overflow".into(),
                limit: limits.max_enum,
            }
        })?;
        if total > limits.max_enum {
            return Err(EvalError::SearchSpaceTooLarge {
                what: "structure space".into(),
                size: total.to_string(),
                limit: limits.max_enum,
            });
        }
        per_symbol.push((name.to_string(), values));
    }
    let mut out = Vec::with_capacity(total as usize);
    for index in 0..total {
        let mut structure = Structure::new(n).expect("n >= 1");
        let mut rest = index;
        for (name, values) in per_symbol.iter().rev() {
            let k = rest % values.len() as u64;
            rest /= values.len() as u64;
            structure = structure.with(name.clone(), values[k as usize].clone());
        }
        out.push(structure);
    }
    Ok(out)
}

/// Compares two formulas on every structure with universe size up to
/// `n_max`. The counterexample is minimal: smallest universe first, then
/// the enumeration order.
pub fn equivalent(
    f: &Formula,
    g: &Formula,
    vocab: &Vocabulary,
    n_max: u64,
    limits: &Limits,
) -> Result<EquivalenceVerdict, EvalError> {
    for n in 1..=n_max {
        let structures = enumerate_structures(vocab, n, limits)?;
        let found = structures
            .par_iter()
            .map(|s| {
                let lhs = eval_closed(s, f, limits)?;
                let rhs = eval_closed(s, g, limits)?;
                if lhs == rhs {
                    Ok(None)
                } else {
                    Ok(Some(Counterexample {
                        structure: s.clone(),
                        lhs,
                        rhs,
                    }))
                }
            })
            .find_first(|r: &Result<Option<Counterexample>, EvalError>| !matches!(r, Ok(None)));
        match found {
            None => {}
            Some(Err(e)) => return Err(e),
            Some(Ok(ce)) => {
                return Ok(EquivalenceVerdict {
                    equivalent: false,
                    counterexample: ce,
                })
            }
        }
    }
    Ok(EquivalenceVerdict {
        equivalent: true,
        counterexample: None,
    })
}

/// The strategy-function semantics of the alternating fixed point: there
/// is a strategy, choosing one body at every even-depth node, whose tree
/// exists and all of whose leaves contain the argument tuple.
///
/// Branches that revisit a (node kind, stage) pair repeat forever and
/// contribute no leaves; the game tree is explored with that cutoff, which
/// bounds every branch by twice the number of stage relations.
pub fn strategy_apfp(
    structure: &Structure,
    env: &Environment,
    node: &Formula,
    limits: &Limits,
) -> Result<bool, EvalError> {
    let Formula::AFix {
        kind,
        pred,
        xs,
        body0,
        body1,
        args,
    } = node
    else {
        panic!("strategy_apfp takes an alternating fixed point node");
    };
    let (w0, w1);
    let (body0, body1) = match kind {
        AFixKind::Apfp => (body0.as_ref(), body1.as_ref()),
        AFixKind::Aifp => {
            w0 = inflationary(pred, xs, body0);
            w1 = inflationary(pred, xs, body1);
            (&w0, &w1)
        }
    };
    let stage_ty = TypeExpr::Tuple(xs.iter().map(|b| b.ty.clone()).collect());
    guarded_value_count(&stage_ty, structure.universe, limits)?;

    let mut evaluator = Evaluator::new(structure, env.clone(), *limits);
    let target: Tuple = args
        .iter()
        .map(|t| match t {
            Term::Var(name) => env
                .get(name)
                .or_else(|| structure.get(name))
                .cloned()
                .ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
            Term::Bot(ty) => Ok(crate::relation::empty_relation(ty)),
            Term::Top(ty) => crate::relation::full_relation(ty, structure.universe, limits),
        })
        .collect::<Result<_, _>>()?;

    let bottom = RelationValue::empty(stage_ty);
    let mut path = Vec::new();
    game(
        &mut evaluator,
        pred,
        xs,
        [body0, body1],
        NodeKind::Choice,
        bottom,
        &target,
        &mut path,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NodeKind {
    /// The strategy picks one body; an invalid pick (stalling without a
    /// common fixed point) kills the tree.
    Choice,
    /// Both bodies spawn children, except those equal to the current
    /// stage.
    Both,
}

#[allow(clippy::too_many_arguments)]
fn game(
    evaluator: &mut Evaluator,
    pred: &str,
    xs: &[Binder],
    bodies: [&Formula; 2],
    kind: NodeKind,
    stage: RelationValue,
    target: &Tuple,
    path: &mut Vec<(NodeKind, RelationValue)>,
) -> Result<bool, EvalError> {
    let q0 = apply_body(evaluator, pred, xs, bodies[0], &stage)?;
    let q1 = apply_body(evaluator, pred, xs, bodies[1], &stage)?;
    if q0 == stage && q1 == stage {
        return Ok(stage.contains(target));
    }
    if path.iter().any(|(k, p)| *k == kind && *p == stage) {
        // The branch repeats this position forever: no leaves below.
        return Ok(true);
    }
    path.push((kind, stage.clone()));
    let result = match kind {
        NodeKind::Choice => {
            // Existential: some valid pick works.
            let mut any = false;
            for q in [&q0, &q1] {
                if q == &stage {
                    continue;
                }
                if game(
                    evaluator,
                    pred,
                    xs,
                    bodies,
                    NodeKind::Both,
                    q.clone(),
                    target,
                    path,
                )? {
                    any = true;
                    break;
                }
            }
            Ok(any)
        }
        NodeKind::Both => {
            // Universal: every spawned child must accept.
            let mut children = vec![&q0];
            if q1 != q0 {
                children.push(&q1);
            }
            let mut all = true;
            for q in children {
                if *q == stage {
                    continue;
                }
                if !game(
                    evaluator,
                    pred,
                    xs,
                    bodies,
                    NodeKind::Choice,
                    q.clone(),
                    target,
                    path,
                )? {
                    all = false;
                    break;
                }
            }
            Ok(all)
        }
    };
    path.pop();
    result
}

fn apply_body(
    evaluator: &mut Evaluator,
    pred: &str,
    xs: &[Binder],
    body: &Formula,
    stage: &RelationValue,
) -> Result<RelationValue, EvalError> {
    evaluator.stage_application(pred, xs, body, stage)
}
