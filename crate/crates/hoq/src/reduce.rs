//! Order reduction: translate a formula and structure one order down,
//! over an exponentially larger universe, preserving truth.
//!
//! The target universe has `2^(n^a)` elements. Element `x < 2^(n^b)`
//! doubles as the second-order `b`-ary relation whose canonical code,
//! read as a number, is `x`. The membership predicates `T_b(x0, x1...xb)`
//! recover application, the constant `n` marks the size of the source
//! universe, and `<` is the natural order on the target. Each source
//! symbol of order three or more drops one order by replacing its
//! order-two components with their representative elements.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{EvalError, ReduceError};
use crate::eval::eval_closed;
use crate::formula::{Binder, Formula, QuantKind, Term};
use crate::limits::Limits;
use crate::relation::{value_index, RelationValue};
use crate::structure::{Structure, Vocabulary};
use crate::types::TypeExpr;

pub const ORDER_SYMBOL: &str = "<";
pub const SIZE_CONSTANT: &str = "n";

/// Everything fixed by the source vocabulary and formula: the shared
/// arity bound, the target vocabulary, and the target universe size.
#[derive(Debug, Clone)]
pub struct ReductionPlan {
    pub arity: usize,
    pub source: Vocabulary,
    pub target: Vocabulary,
    pub source_universe: u64,
    pub target_universe: u64,
}

fn quantified_arities(f: &Formula, out: &mut Vec<usize>) {
    match f {
        Formula::Quant { ty, .. } => out.push(ty.max_tuple_size()),
        Formula::Tc { xs, ys, .. } => {
            out.extend(xs.iter().chain(ys).map(|b| b.ty.max_tuple_size()))
        }
        Formula::Fix { xs, .. } | Formula::NFix { xs, .. } | Formula::AFix { xs, .. } => {
            out.extend(xs.iter().map(|b| b.ty.max_tuple_size()))
        }
        _ => {}
    }
    for sub in f.subformulas() {
        quantified_arities(sub, out);
    }
}

/// The dropped-order image of a type: order 2 collapses to an element,
/// higher orders map componentwise.
fn reduce_type(ty: &TypeExpr) -> TypeExpr {
    match ty {
        TypeExpr::Iota => TypeExpr::Iota,
        TypeExpr::Tuple(children) => {
            if ty.order() == 2 {
                TypeExpr::Iota
            } else {
                TypeExpr::Tuple(children.iter().map(reduce_type).collect())
            }
        }
    }
}

/// Computes the reduction plan for a formula over a vocabulary containing
/// the first-order order symbol, for a structure of the given universe
/// size.
pub fn plan(
    vocab: &Vocabulary,
    f: &Formula,
    source_universe: u64,
    limits: &Limits,
) -> Result<ReductionPlan, ReduceError> {
    match vocab.get(ORDER_SYMBOL) {
        Some(ty) if *ty == TypeExpr::uniform(2, 2) => {}
        _ => return Err(ReduceError::MissingOrder(ORDER_SYMBOL.into())),
    }
    let mut arities = vec![1usize];
    for (name, ty) in vocab.iter() {
        if name != ORDER_SYMBOL {
            arities.push(ty.max_tuple_size());
        }
    }
    quantified_arities(f, &mut arities);
    let a = arities.into_iter().max().unwrap_or(1);

    let positions = BigUint::from(source_universe).pow(a as u32);
    let positions =
        positions
            .to_u64()
            .filter(|&p| p < 64)
            .ok_or_else(|| ReduceError::TargetTooLarge {
                size: format!("2^{}^{a}", source_universe),
                limit: limits.max_target_universe,
            })?;
    let target_universe = 1u64 << positions;
    if target_universe > limits.max_target_universe {
        return Err(ReduceError::TargetTooLarge {
            size: target_universe.to_string(),
            limit: limits.max_target_universe,
        });
    }

    let mut target = Vocabulary::empty()
        .with_symbol(ORDER_SYMBOL, TypeExpr::uniform(2, 2))
        .and_then(|v| v.with_symbol(SIZE_CONSTANT, TypeExpr::Iota))
        .expect("fresh vocabulary");
    for b in 1..=a {
        target = target
            .with_symbol(format!("T{b}"), TypeExpr::uniform(b + 1, 2))
            .expect("membership symbols are distinct");
    }
    for (name, ty) in vocab.iter() {
        if name == ORDER_SYMBOL {
            continue;
        }
        if ty.order() == 2 && ty.arity() > a {
            return Err(ReduceError::BadSymbolOrder(name.to_string(), 2));
        }
        target = target
            .with_symbol(name, reduce_type(ty))
            .map_err(|_| ReduceError::BadSymbolOrder(name.to_string(), ty.order()))?;
    }
    Ok(ReductionPlan {
        arity: a,
        source: vocab.clone(),
        target,
        source_universe,
        target_universe,
    })
}

/// Rank of each element under the structure's order symbol; the reduction
/// relabels elements by rank so the target's natural order restricts to
/// the source order.
fn order_ranks(s: &Structure) -> Result<Vec<u64>, ReduceError> {
    let n = s.universe as usize;
    let lt = s
        .get(ORDER_SYMBOL)
        .ok_or(ReduceError::MissingOrder(ORDER_SYMBOL.into()))?;
    let mut ranks = vec![0u64; n];
    for x in 0..n as u64 {
        let mut below = 0;
        for y in 0..n as u64 {
            if lt.contains(&[RelationValue::Element(y), RelationValue::Element(x)]) {
                below += 1;
            }
        }
        ranks[x as usize] = below;
    }
    let mut seen = vec![false; n];
    for &r in &ranks {
        if r as usize >= n || seen[r as usize] {
            return Err(ReduceError::NotTotalOrder);
        }
        seen[r as usize] = true;
    }
    Ok(ranks)
}

/// The representative of a source value in the target universe: elements
/// map to their order rank, order-2 relations to their code value, higher
/// orders componentwise.
fn represent(
    value: &RelationValue,
    ranks: &[u64],
    n: u64,
    limits: &Limits,
) -> Result<RelationValue, EvalError> {
    match value {
        RelationValue::Element(e) => Ok(RelationValue::Element(ranks[*e as usize])),
        RelationValue::Set { ty, tuples } => {
            if ty.order() == 2 {
                let relabeled = RelationValue::set(
                    ty.clone(),
                    tuples
                        .iter()
                        .map(|t| {
                            t.iter()
                                .map(|c| match c {
                                    RelationValue::Element(e) => {
                                        RelationValue::Element(ranks[*e as usize])
                                    }
                                    other => other.clone(),
                                })
                                .collect()
                        })
                        .collect(),
                );
                let code = value_index(&relabeled, n, limits)?;
                Ok(RelationValue::Element(
                    code.to_u64().expect("guarded target"),
                ))
            } else {
                let mapped = tuples
                    .iter()
                    .map(|t| {
                        t.iter()
                            .map(|c| represent(c, ranks, n, limits))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(RelationValue::set(reduce_type(ty), mapped))
            }
        }
    }
}

/// Builds the target structure: the order, the size constant, the
/// membership predicates, and the dropped-order images of the source
/// interpretations.
pub fn reduce_structure(p: &ReductionPlan, s: &Structure) -> Result<Structure, ReduceError> {
    let limits = Limits::default();
    let n = s.universe;
    if n != p.source_universe {
        return Err(ReduceError::NotTotalOrder);
    }
    let ranks = order_ranks(s)?;
    let m = p.target_universe;
    let mut target = Structure::new(m).expect("target is nonempty");

    let lt_ty = TypeExpr::uniform(2, 2);
    let mut lt = Vec::new();
    for x in 0..m {
        for y in x + 1..m {
            lt.push(vec![RelationValue::Element(x), RelationValue::Element(y)]);
        }
    }
    target = target.with(ORDER_SYMBOL, RelationValue::set(lt_ty, lt));
    target = target.with(SIZE_CONSTANT, RelationValue::Element(n));

    for b in 1..=p.arity {
        let ty = TypeExpr::uniform(b + 1, 2);
        let positions = (n as u128).pow(b as u32) as u64;
        let coded = if positions >= 63 {
            m
        } else {
            m.min(1u64 << positions)
        };
        let mut tuples = Vec::new();
        // x0 codes a b-ary relation over [0, n): bit p of x0 is the tuple
        // at position p in base-n digits, first digit most significant.
        for x0 in 0..coded {
            for pos in 0..positions {
                if (x0 >> pos) & 1 == 0 {
                    continue;
                }
                let mut digits = Vec::with_capacity(b + 1);
                digits.push(RelationValue::Element(x0));
                let mut rev = Vec::with_capacity(b);
                let mut rest = pos;
                for _ in 0..b {
                    rev.push(RelationValue::Element(rest % n));
                    rest /= n;
                }
                rev.reverse();
                digits.extend(rev);
                tuples.push(digits);
            }
        }
        target = target.with(format!("T{b}"), RelationValue::set(ty, tuples));
    }

    for (name, value) in s.interpretations() {
        if name == ORDER_SYMBOL {
            continue;
        }
        let image = represent(value, &ranks, n, &limits)?;
        target = target.with(name, image);
    }
    Ok(target)
}

/// `x < n`: the element is one of the source-universe representatives.
fn below_size_constant(x: &str) -> Formula {
    Formula::apply(ORDER_SYMBOL, vec![Term::var(x), Term::var(SIZE_CONSTANT)])
}

/// `x = 0` in the target order.
fn is_least(x: &str, namer: &mut NameSupply) -> Formula {
    let y = namer.fresh("v");
    Formula::exists(
        y.clone(),
        TypeExpr::Iota,
        Formula::apply(ORDER_SYMBOL, vec![Term::var(y), Term::var(x)]),
    )
    .not()
}

/// `x < 2^(n^b)`: the element is a valid code of a `b`-ary second-order
/// relation. Expressed through the next membership predicate when one
/// exists; at the top arity every element qualifies.
fn below_code_bound(p: &ReductionPlan, x: &str, b: usize, namer: &mut NameSupply) -> Formula {
    if b >= p.arity {
        return Formula::truth();
    }
    // Every member tuple of x, read as a (b+1)-ary relation, has first
    // digit 0; with the first digit most significant that caps the code.
    let row: Vec<String> = (0..b + 1).map(|_| namer.fresh("v")).collect();
    let mut args = vec![Term::var(x)];
    args.extend(row.iter().map(|n| Term::var(n.clone())));
    let member = Formula::apply(format!("T{}", b + 1), args);
    let body = member.implies(is_least(&row[0], namer));
    row.into_iter()
        .rev()
        .fold(body, |acc, v| Formula::forall(v, TypeExpr::Iota, acc))
}

/// The membership-soundness predicate for a reduced variable: it contains
/// no element that fails to encode a second-order relation. Defined
/// recursively down the type.
pub fn gen_acc(p: &ReductionPlan, ty: &TypeExpr, var: &str, namer: &mut NameSupply) -> Formula {
    match ty {
        TypeExpr::Iota => Formula::truth(),
        TypeExpr::Tuple(children) => {
            if ty.order() == 2 {
                // An order-2 target variable stands for an order-3 source
                // relation: its members are element tuples coding b-ary
                // relations.
                let b = children.len();
                let row: Vec<String> = (0..b).map(|_| namer.fresh("w")).collect();
                let member = Formula::apply(
                    var,
                    row.iter().map(|n| Term::var(n.clone())).collect::<Vec<_>>(),
                );
                let sound = Formula::and(
                    row.iter()
                        .map(|w| below_code_bound(p, w, b, namer))
                        .collect(),
                );
                let body = member.implies(sound);
                row.into_iter()
                    .rev()
                    .fold(body, |acc, w| Formula::forall(w, TypeExpr::Iota, acc))
            } else {
                let row: Vec<(String, TypeExpr)> = children
                    .iter()
                    .map(|c| (namer.fresh("W"), c.clone()))
                    .collect();
                let member = Formula::apply(
                    var,
                    row.iter()
                        .map(|(n, _)| Term::var(n.clone()))
                        .collect::<Vec<_>>(),
                );
                let sound = Formula::and(
                    row.iter()
                        .map(|(n, c)| gen_acc(p, c, n, namer))
                        .collect::<Vec<_>>(),
                );
                let body = member.implies(sound);
                row.into_iter()
                    .rev()
                    .fold(body, |acc, (n, c)| Formula::forall(n, c, acc))
            }
        }
    }
}

/// The public entry: soundness of an element standing for a `b`-ary
/// second-order relation (`q = 1`), or of a higher-order reduced variable.
pub fn acc_formula(p: &ReductionPlan, var: &str, ty: &TypeExpr, b: usize) -> Formula {
    let mut namer = NameSupply::new(format!("{var}_"));
    match ty {
        TypeExpr::Iota => below_code_bound(p, var, b, &mut namer),
        t => gen_acc(p, t, var, &mut namer),
    }
}

pub struct NameSupply {
    prefix: String,
    counter: usize,
}

impl NameSupply {
    pub fn new(prefix: String) -> Self {
        NameSupply { prefix, counter: 0 }
    }

    fn fresh(&mut self, base: &str) -> String {
        self.counter += 1;
        format!("{}{base}{}", self.prefix, self.counter)
    }
}

/// Rewrites the formula into its order-reduced form. The input is first
/// desugared so only `exists`, `or`, and `not` connect subformulas, then
/// translated rule by rule; nondeterministic and alternating fixed points
/// have no translation rule.
pub fn reduce_formula(p: &ReductionPlan, f: &Formula) -> Result<Formula, ReduceError> {
    let desugared = desugar(f);
    let mut scope = Vec::new();
    let translated = translate(p, &desugared, &mut scope)?;
    Ok(simplify(&translated))
}

/// Pushes `forall` and `and` into the `exists` / `or` / `not` core.
fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Apply { .. } | Formula::Equal { .. } => f.clone(),
        Formula::And(cs) => Formula::or(cs.iter().map(|c| desugar(c).not()).collect()).not(),
        Formula::Or(cs) => Formula::or(cs.iter().map(desugar).collect()),
        Formula::Not(c) => desugar(c).not(),
        Formula::Quant {
            kind: QuantKind::Exists,
            var,
            ty,
            body,
        } => Formula::exists(var.clone(), ty.clone(), desugar(body)),
        Formula::Quant {
            kind: QuantKind::Forall,
            var,
            ty,
            body,
        } => Formula::exists(var.clone(), ty.clone(), desugar(body).not()).not(),
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => Formula::Tc {
            xs: xs.clone(),
            ys: ys.clone(),
            body: Box::new(desugar(body)),
            from: from.clone(),
            to: to.clone(),
        },
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => Formula::Fix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body: Box::new(desugar(body)),
            args: args.clone(),
        },
        other => other.clone(),
    }
}

/// Removes the double negations the desugaring introduced.
fn simplify(f: &Formula) -> Formula {
    match f {
        Formula::Not(c) => match simplify(c) {
            Formula::Not(inner) => *inner,
            other => other.not(),
        },
        Formula::Or(cs) => Formula::Or(cs.iter().map(simplify).collect()),
        Formula::And(cs) => Formula::And(cs.iter().map(simplify).collect()),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(simplify(body)),
        },
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => Formula::Tc {
            xs: xs.clone(),
            ys: ys.clone(),
            body: Box::new(simplify(body)),
            from: from.clone(),
            to: to.clone(),
        },
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => Formula::Fix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body: Box::new(simplify(body)),
            args: args.clone(),
        },
        other => other.clone(),
    }
}

/// What a name stands for in the reduced formula.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    /// A target element representing a source order-2 relation of this
    /// arity; its applications become membership queries.
    CodedRelation(usize),
    /// A genuine relation (a dropped-order variable or a fixed-point
    /// predicate); applications stay applications.
    Relation,
    Element,
}

fn binder_repr(ty: &TypeExpr) -> Repr {
    match ty.order() {
        1 => Repr::Element,
        2 => Repr::CodedRelation(ty.arity()),
        _ => Repr::Relation,
    }
}

fn translate(
    p: &ReductionPlan,
    f: &Formula,
    scope: &mut Vec<(String, Repr)>,
) -> Result<Formula, ReduceError> {
    match f {
        Formula::Equal { lhs, rhs, .. } => Ok(Formula::Equal {
            lhs: reduce_term(lhs),
            rhs: reduce_term(rhs),
            ascription: None,
        }),
        Formula::Apply { head, args } => {
            let repr = head_repr(p, scope, head);
            match repr {
                Repr::CodedRelation(b) if !is_target_primitive(head) => {
                    // A second-order atom becomes a membership query.
                    let mut new_args = vec![Term::var(head.clone())];
                    new_args.extend(args.iter().map(reduce_term));
                    Ok(Formula::apply(format!("T{b}"), new_args))
                }
                _ => Ok(Formula::Apply {
                    head: head.clone(),
                    args: args.iter().map(reduce_term).collect(),
                }),
            }
        }
        Formula::Or(cs) => Ok(Formula::or(
            cs.iter()
                .map(|c| translate(p, c, scope))
                .collect::<Result<Vec<_>, _>>()?,
        )),
        Formula::Not(c) => Ok(translate(p, c, scope)?.not()),
        Formula::Quant {
            kind: QuantKind::Exists,
            var,
            ty,
            body,
        } => {
            scope.push((var.clone(), binder_repr(ty)));
            let body = translate(p, body, scope);
            scope.pop();
            let body = body?;
            match ty {
                TypeExpr::Iota => Ok(Formula::exists(
                    var.clone(),
                    TypeExpr::Iota,
                    Formula::and(vec![below_size_constant(var), body]),
                )),
                t if t.order() == 2 => {
                    let mut bound_namer = NameSupply::new(format!("{var}_"));
                    let guard = below_code_bound(p, var, t.arity(), &mut bound_namer);
                    Ok(Formula::exists(
                        var.clone(),
                        TypeExpr::Iota,
                        Formula::and(vec![guard, body]),
                    ))
                }
                t => Ok(Formula::exists(var.clone(), reduce_type(t), body)),
            }
        }
        Formula::Quant {
            kind: QuantKind::Forall,
            ..
        } => {
            unreachable!("desugaring removed universal quantifiers")
        }
        Formula::And(_) => unreachable!("desugaring removed conjunctions"),
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => {
            let new_xs = reduce_binders(xs);
            let new_ys = reduce_binders(ys);
            let guard = Formula::and(
                new_xs
                    .iter()
                    .zip(xs)
                    .chain(new_ys.iter().zip(ys))
                    .map(|(nb, ob)| binder_acc(p, nb, ob))
                    .collect(),
            );
            let depth = scope.len();
            scope.extend(
                xs.iter()
                    .chain(ys)
                    .map(|b| (b.name.clone(), binder_repr(&b.ty))),
            );
            let body = translate(p, body, scope);
            scope.truncate(depth);
            Ok(Formula::Tc {
                xs: new_xs,
                ys: new_ys,
                body: Box::new(Formula::and(vec![guard, body?])),
                from: from.iter().map(reduce_term).collect(),
                to: to.iter().map(reduce_term).collect(),
            })
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let new_xs = reduce_binders(xs);
            let guard = Formula::and(
                new_xs
                    .iter()
                    .zip(xs)
                    .map(|(nb, ob)| binder_acc(p, nb, ob))
                    .collect(),
            );
            let depth = scope.len();
            // The fixed-point predicate stays operator bound.
            scope.push((pred.clone(), Repr::Relation));
            scope.extend(xs.iter().map(|b| (b.name.clone(), binder_repr(&b.ty))));
            let body = translate(p, body, scope);
            scope.truncate(depth);
            Ok(Formula::Fix {
                kind: *kind,
                pred: pred.clone(),
                xs: new_xs,
                body: Box::new(Formula::and(vec![guard, body?])),
                args: args.iter().map(reduce_term).collect(),
            })
        }
        Formula::NFix { kind, .. } => Err(ReduceError::UnsupportedNode(
            match kind {
                crate::formula::NFixKind::Npfp => "NPFP",
                crate::formula::NFixKind::Nifp => "NIFP",
            }
            .into(),
        )),
        Formula::AFix { kind, .. } => Err(ReduceError::UnsupportedNode(
            match kind {
                crate::formula::AFixKind::Apfp => "APFP",
                crate::formula::AFixKind::Aifp => "AIFP",
            }
            .into(),
        )),
    }
}

fn head_repr(p: &ReductionPlan, scope: &[(String, Repr)], head: &str) -> Repr {
    scope
        .iter()
        .rev()
        .find(|(n, _)| n == head)
        .map(|(_, r)| r.clone())
        .or_else(|| p.source.get(head).map(binder_repr))
        .unwrap_or(Repr::Element)
}

fn is_target_primitive(head: &str) -> bool {
    head == ORDER_SYMBOL
}

fn reduce_term(t: &Term) -> Term {
    match t {
        Term::Var(n) => Term::var(n.clone()),
        Term::Bot(ty) => Term::Bot(reduce_type(ty)),
        Term::Top(ty) => Term::Top(reduce_type(ty)),
    }
}

fn reduce_binders(bs: &[Binder]) -> Vec<Binder> {
    bs.iter()
        .map(|b| Binder::new(b.name.clone(), reduce_type(&b.ty)))
        .collect()
}

fn binder_acc(p: &ReductionPlan, new: &Binder, old: &Binder) -> Formula {
    match &old.ty {
        TypeExpr::Iota => below_size_constant(&new.name),
        t if t.order() == 2 => acc_formula(p, &new.name, &TypeExpr::Iota, t.arity()),
        t => acc_formula(p, &new.name, &reduce_type(t), t.arity()),
    }
}

/// Double evaluation: the source formula on the source structure against
/// the reduced formula on the reduced structure.
pub fn check_reduction(
    p: &ReductionPlan,
    s: &Structure,
    f: &Formula,
    limits: &Limits,
) -> Result<bool, ReduceError> {
    let direct = eval_closed(s, f, limits)?;
    let target = reduce_structure(p, s)?;
    let reduced = reduce_formula(p, f)?;
    let translated = eval_closed(&target, &reduced, limits)?;
    Ok(direct == translated)
}

/// The reduced structure and formula together, as the command line emits
/// them.
pub fn reduced_pair(
    p: &ReductionPlan,
    s: &Structure,
    f: &Formula,
) -> Result<(Structure, Formula), ReduceError> {
    Ok((reduce_structure(p, s)?, reduce_formula(p, f)?))
}
