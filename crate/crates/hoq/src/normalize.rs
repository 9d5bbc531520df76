//! Semantics-preserving rewrites into the four normal forms, plus the
//! operator-shape checker and the monadic lint.
//!
//! * prefix normal form — all quantifiers hoisted to the front by the
//!   polarity-tracking extraction that merges two prefixes while keeping
//!   the top-order alternation count at the larger of the two,
//! * step normal form — every tuple type of order `q` holds only types of
//!   order `q - 1`, with lower-order arguments wrapped in singleton
//!   chains,
//! * arity normal form — every quantified tuple type becomes the uniform
//!   type of one global arity, padded atoms repeating their last argument
//!   and padded binders guarded to keep only padded tuples,
//! * decreasing normal form — quantifier orders non-increasing outermost
//!   in, achieved by swapping an adjacent increasing pair while absorbing
//!   the outer variable into the inner one's type.
//!
//! Operator nodes are opaque to the prefix machinery; the rewrites recurse
//! into their bodies as independent subproblems.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::NormalizeError;
use crate::formula::{Binder, Formula, QuantKind, Term};
use crate::structure::Vocabulary;
use crate::types::TypeExpr;

/// Positive or negative position; composing two negatives cancels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn compose(self, other: Polarity) -> Polarity {
        if self == other {
            Polarity::Plus
        } else {
            Polarity::Minus
        }
    }

    pub fn apply_quant(self, kind: QuantKind) -> QuantKind {
        match self {
            Polarity::Plus => kind,
            Polarity::Minus => kind.dual(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conn {
    And,
    Or,
}

impl Conn {
    fn apply(self, polarity: Polarity) -> Conn {
        match (self, polarity) {
            (c, Polarity::Plus) => c,
            (Conn::And, Polarity::Minus) => Conn::Or,
            (Conn::Or, Polarity::Minus) => Conn::And,
        }
    }

    fn build(self, lhs: Formula, rhs: Formula) -> Formula {
        match self {
            Conn::And => Formula::and(vec![lhs, rhs]),
            Conn::Or => Formula::or(vec![lhs, rhs]),
        }
    }
}

/// Shape flags plus per-order quantifier block counts before and after a
/// pipeline run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormReport {
    pub pnf: bool,
    pub snf: bool,
    pub anf: bool,
    pub dnf: bool,
    pub operator_nf: bool,
    pub blocks_before: BTreeMap<u32, usize>,
    pub blocks_after: BTreeMap<u32, usize>,
}

/// Splits a prenex formula into its quantifier prefix and matrix.
pub fn quantifier_prefix(f: &Formula) -> (Vec<(QuantKind, String, TypeExpr)>, &Formula) {
    let mut prefix = Vec::new();
    let mut cursor = f;
    while let Formula::Quant {
        kind,
        var,
        ty,
        body,
    } = cursor
    {
        prefix.push((*kind, var.clone(), ty.clone()));
        cursor = body;
    }
    (prefix, cursor)
}

fn rebuild(prefix: Vec<(QuantKind, String, TypeExpr)>, matrix: Formula) -> Formula {
    prefix
        .into_iter()
        .rev()
        .fold(matrix, |acc, (kind, var, ty)| {
            Formula::quant(kind, var, ty, acc)
        })
}

/// True when the formula is a quantifier prefix over a quantifier-free
/// matrix. Operator nodes count as atoms; their bodies are not scanned.
pub fn is_prenex(f: &Formula) -> bool {
    fn quantifier_free(f: &Formula) -> bool {
        match f {
            Formula::Quant { .. } => false,
            Formula::Tc { .. }
            | Formula::Fix { .. }
            | Formula::NFix { .. }
            | Formula::AFix { .. } => true,
            other => other.subformulas().iter().all(|c| quantifier_free(c)),
        }
    }
    let (_, matrix) = quantifier_prefix(f);
    quantifier_free(matrix)
}

/// Number of maximal same-kind runs among the order-`r` quantifiers of the
/// prefix, and whether the first such quantifier is universal.
pub fn order_blocks(f: &Formula, r: u32) -> (usize, bool) {
    let (prefix, _) = quantifier_prefix(f);
    let kinds: Vec<QuantKind> = prefix
        .iter()
        .filter(|(_, _, ty)| ty.order() == r)
        .map(|(k, _, _)| *k)
        .collect();
    let mut blocks = 0;
    let mut last = None;
    for k in &kinds {
        if last != Some(*k) {
            blocks += 1;
            last = Some(*k);
        }
    }
    (blocks, kinds.first() == Some(&QuantKind::Forall))
}

/// Per-order block counts over the prefix.
pub fn blocks_by_order(f: &Formula) -> BTreeMap<u32, usize> {
    let (prefix, _) = quantifier_prefix(f);
    let mut out = BTreeMap::new();
    for order in prefix
        .iter()
        .map(|(_, _, ty)| ty.order())
        .collect::<std::collections::BTreeSet<_>>()
    {
        out.insert(order, order_blocks(f, order).0);
    }
    out
}

/// Prefix normal form with an existential lead at order `r`. Bound names
/// must be pairwise distinct (alpha-rename first).
pub fn to_pnf(r: u32, f: &Formula) -> Formula {
    let g = map_operator_bodies(f, &|body| to_pnf(r, body));
    flatten(&aux(r, &g, QuantKind::Exists, Polarity::Plus))
}

/// The co-variant: a universal lead at order `r`.
pub fn to_pnf_co(r: u32, f: &Formula) -> Formula {
    let g = map_operator_bodies(f, &|body| to_pnf_co(r, body));
    flatten(&aux(r, &g, QuantKind::Forall, Polarity::Plus))
}

/// Collapses nested same-connective nodes; the merge step pairs operands
/// binary, flattening keeps repeated runs stable.
fn flatten(f: &Formula) -> Formula {
    match f {
        Formula::And(cs) => {
            let mut out = Vec::new();
            for c in cs {
                match flatten(c) {
                    Formula::And(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            Formula::And(out)
        }
        Formula::Or(cs) => {
            let mut out = Vec::new();
            for c in cs {
                match flatten(c) {
                    Formula::Or(inner) => out.extend(inner),
                    other => out.push(other),
                }
            }
            Formula::Or(out)
        }
        Formula::Not(c) => flatten(c).not(),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(flatten(body)),
        },
        other => other.clone(),
    }
}

/// Whichever of the two variants has fewer order-`r` alternation blocks;
/// ties go to the existential lead.
pub fn best_pnf(r: u32, f: &Formula) -> Formula {
    let e = to_pnf(r, f);
    let a = to_pnf_co(r, f);
    if order_blocks(&a, r).0 < order_blocks(&e, r).0 {
        a
    } else {
        e
    }
}

fn map_operator_bodies(f: &Formula, rewrite: &dyn Fn(&Formula) -> Formula) -> Formula {
    match f {
        Formula::Apply { .. } | Formula::Equal { .. } => f.clone(),
        Formula::And(cs) => {
            Formula::And(cs.iter().map(|c| map_operator_bodies(c, rewrite)).collect())
        }
        Formula::Or(cs) => {
            Formula::Or(cs.iter().map(|c| map_operator_bodies(c, rewrite)).collect())
        }
        Formula::Not(c) => map_operator_bodies(c, rewrite).not(),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(map_operator_bodies(body, rewrite)),
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
            body: Box::new(rewrite(body)),
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
            body: Box::new(rewrite(body)),
            args: args.clone(),
        },
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => Formula::NFix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body0: Box::new(rewrite(body0)),
            body1: Box::new(rewrite(body1)),
            args: args.clone(),
        },
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => Formula::AFix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body0: Box::new(rewrite(body0)),
            body1: Box::new(rewrite(body1)),
            args: args.clone(),
        },
    }
}

/// The extraction pass: `q` is the kind of the last order-`r` quantifier
/// emitted, `pol` the parity of enclosing negations.
fn aux(r: u32, f: &Formula, q: QuantKind, pol: Polarity) -> Formula {
    match f {
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            let emitted = pol.apply_quant(*kind);
            let inner_q = if ty.order() == r { emitted } else { q };
            Formula::quant(emitted, var.clone(), ty.clone(), aux(r, body, inner_q, pol))
        }
        Formula::Not(c) => aux(r, c, q, pol.flip()),
        Formula::And(cs) | Formula::Or(cs) => {
            let conn = match f {
                Formula::And(_) => Conn::And.apply(pol),
                _ => Conn::Or.apply(pol),
            };
            let mut parts = cs.iter().map(|c| aux(r, c, q, pol));
            let first = parts.next().expect("connectives are non-empty");
            parts.fold(first, |acc, part| merge(r, acc, part, q, conn))
        }
        atomic => {
            if pol == Polarity::Minus {
                atomic.clone().not()
            } else {
                atomic.clone()
            }
        }
    }
}

/// Merges two prenex parts under a connective, greedily extracting
/// quantifiers of the wanted kind at order `r` (and lower-order ones
/// freely), switching kind only when both sides block.
fn merge(r: u32, lhs: Formula, rhs: Formula, q: QuantKind, conn: Conn) -> Formula {
    match lhs {
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } if ty.order() < r || kind == q => {
            Formula::quant(kind, var, ty, merge(r, *body, rhs, q, conn))
        }
        Formula::Quant { .. } => match rhs {
            Formula::Quant {
                kind: k2,
                var: v2,
                ty: t2,
                body: b2,
            } if t2.order() < r || k2 == q => {
                Formula::quant(k2, v2, t2, merge(r, lhs, *b2, q, conn))
            }
            rhs @ Formula::Quant { .. } => merge(r, lhs, rhs, q.dual(), conn),
            rhs => drain(lhs, rhs, conn, false),
        },
        lhs => drain(rhs, lhs, conn, true),
    }
}

/// Emits all remaining quantifiers of `quantified`, then joins the
/// matrices; `other` keeps its original operand side.
fn drain(quantified: Formula, other: Formula, conn: Conn, other_is_left: bool) -> Formula {
    match quantified {
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => Formula::quant(kind, var, ty, drain(*body, other, conn, other_is_left)),
        matrix => {
            if other_is_left {
                conn.build(other, matrix)
            } else {
                conn.build(matrix, other)
            }
        }
    }
}

fn fresh_namer(f: &Formula) -> Namer {
    let mut used: std::collections::BTreeSet<String> = f.free_names();
    used.extend(f.bound_names());
    Namer { used }
}

struct Namer {
    used: std::collections::BTreeSet<String>,
}

impl Namer {
    fn fresh(&mut self, base: &str) -> String {
        if self.used.insert(base.to_string()) {
            return base.to_string();
        }
        let mut k = 1usize;
        loop {
            let candidate = format!("{base}{k}");
            if self.used.insert(candidate.clone()) {
                return candidate;
            }
            k += 1;
        }
    }
}

/// The step-form image of a type: children recursively stepped, then
/// wrapped in singleton tuples up to one order below the parent.
pub fn snf_type(ty: &TypeExpr) -> TypeExpr {
    match ty {
        TypeExpr::Iota => TypeExpr::Iota,
        TypeExpr::Tuple(children) => {
            let q = ty.order();
            TypeExpr::Tuple(
                children
                    .iter()
                    .map(|c| wrap_type(snf_type(c), q - 1 - c.order()))
                    .collect(),
            )
        }
    }
}

fn wrap_type(ty: TypeExpr, levels: u32) -> TypeExpr {
    (0..levels).fold(ty, |t, _| TypeExpr::Tuple(vec![t]))
}

/// The singleton-chain constraint: `top_var` is the `levels`-fold
/// singleton of `base`, via intermediate existentials.
fn equiv_chain(
    base: Term,
    base_ty: &TypeExpr,
    top_var: &str,
    levels: u32,
    namer: &mut Namer,
) -> Formula {
    debug_assert!(levels >= 1);
    // s_0 = base, s_levels = top_var; quantify the strictly intermediate
    // links.
    let mut names: Vec<Term> = vec![base];
    let mut types: Vec<TypeExpr> = vec![base_ty.clone()];
    for k in 1..levels {
        names.push(Term::var(namer.fresh("s")));
        types.push(wrap_type(base_ty.clone(), k));
    }
    names.push(Term::var(top_var));
    types.push(wrap_type(base_ty.clone(), levels));
    let mut constraints = Vec::new();
    for k in 1..=levels as usize {
        let holder = names[k].clone();
        let member = names[k - 1].clone();
        let member_ty = types[k - 1].clone();
        let holder_name = match &holder {
            Term::Var(n) => n.clone(),
            _ => unreachable!("chain holders are variables"),
        };
        constraints.push(Formula::apply(holder_name.clone(), vec![member.clone()]));
        let t = namer.fresh("t");
        constraints.push(Formula::forall(
            t.clone(),
            member_ty,
            Formula::apply(holder_name, vec![Term::var(t.clone())])
                .implies(Formula::equal(Term::var(t), member)),
        ));
    }
    let body = Formula::and(constraints);
    // Quantify intermediates (names[1..levels]) existentially.
    (1..levels as usize).rev().fold(body, |acc, k| {
        let name = names[k].var_name().unwrap().to_string();
        Formula::exists(name, types[k].clone(), acc)
    })
}

/// Step normal form: re-types quantified variables and wraps mixed-order
/// arguments in singleton chains. Vocabulary symbols keep their types.
pub fn to_snf(f: &Formula) -> Formula {
    let mut namer = fresh_namer(f);
    snf_rec(f, &mut BTreeMap::new(), &mut namer)
}

fn snf_rec(f: &Formula, rewritten: &mut BTreeMap<String, TypeExpr>, namer: &mut Namer) -> Formula {
    match f {
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            let new_ty = snf_type(ty);
            let old = rewritten.insert(var.clone(), ty.clone());
            let body = snf_rec(body, rewritten, namer);
            match old {
                Some(t) => {
                    rewritten.insert(var.clone(), t);
                }
                None => {
                    rewritten.remove(var);
                }
            }
            Formula::quant(*kind, var.clone(), new_ty, body)
        }
        Formula::Apply { head, args } => match rewritten.get(head).cloned() {
            Some(orig_ty) => {
                let q = orig_ty.order();
                let mut guards = Vec::new();
                let mut new_args = Vec::with_capacity(args.len());
                let mut chain_binders: Vec<(String, TypeExpr)> = Vec::new();
                for (arg, child) in args.iter().zip(orig_ty.children()) {
                    let levels = q - 1 - child.order();
                    if levels == 0 {
                        new_args.push(retype_term(arg));
                        continue;
                    }
                    let base_ty = snf_type(child);
                    let top = namer.fresh("s");
                    let top_ty = wrap_type(base_ty.clone(), levels);
                    guards.push(equiv_chain(retype_term(arg), &base_ty, &top, levels, namer));
                    chain_binders.push((top.clone(), top_ty));
                    new_args.push(Term::var(top));
                }
                let atom = Formula::Apply {
                    head: head.clone(),
                    args: new_args,
                };
                if guards.is_empty() {
                    atom
                } else {
                    let mut parts = vec![atom];
                    parts.extend(guards);
                    chain_binders
                        .into_iter()
                        .rev()
                        .fold(Formula::and(parts), |acc, (name, ty)| {
                            Formula::exists(name, ty, acc)
                        })
                }
            }
            None => f.clone(),
        },
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => Formula::Equal {
            lhs: retype_term(lhs),
            rhs: retype_term(rhs),
            ascription: ascription.as_ref().map(snf_type),
        },
        Formula::And(cs) => Formula::And(cs.iter().map(|c| snf_rec(c, rewritten, namer)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| snf_rec(c, rewritten, namer)).collect()),
        Formula::Not(c) => snf_rec(c, rewritten, namer).not(),
        // Operator binders keep their types; bodies are rewritten with the
        // bound names shadowed out of the rewrite map.
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => {
            let shadow: Vec<&str> = xs.iter().chain(ys).map(|b| b.name.as_str()).collect();
            let body = with_shadowed(rewritten, &shadow, |rw| snf_rec(body, rw, namer));
            Formula::Tc {
                xs: xs.clone(),
                ys: ys.clone(),
                body: Box::new(body),
                from: from.clone(),
                to: to.clone(),
            }
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body = with_shadowed(rewritten, &shadow, |rw| snf_rec(body, rw, namer));
            Formula::Fix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body: Box::new(body),
                args: args.clone(),
            }
        }
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body0 = with_shadowed(rewritten, &shadow, |rw| snf_rec(body0, rw, namer));
            let body1 = with_shadowed(rewritten, &shadow, |rw| snf_rec(body1, rw, namer));
            Formula::NFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(body0),
                body1: Box::new(body1),
                args: args.clone(),
            }
        }
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body0 = with_shadowed(rewritten, &shadow, |rw| snf_rec(body0, rw, namer));
            let body1 = with_shadowed(rewritten, &shadow, |rw| snf_rec(body1, rw, namer));
            Formula::AFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(body0),
                body1: Box::new(body1),
                args: args.clone(),
            }
        }
    }
}

fn retype_term(t: &Term) -> Term {
    match t {
        Term::Var(n) => Term::Var(n.clone()),
        Term::Bot(ty) => Term::Bot(snf_type(ty)),
        Term::Top(ty) => Term::Top(snf_type(ty)),
    }
}

fn with_shadowed<T>(
    map: &mut BTreeMap<String, TypeExpr>,
    names: &[&str],
    f: impl FnOnce(&mut BTreeMap<String, TypeExpr>) -> T,
) -> T {
    let saved: Vec<(String, Option<TypeExpr>)> = names
        .iter()
        .map(|n| (n.to_string(), map.remove(*n)))
        .collect();
    let out = f(map);
    for (name, old) in saved {
        if let Some(t) = old {
            map.insert(name, t);
        }
    }
    out
}

/// True when every quantified tuple type is in step form.
pub fn is_snf(f: &Formula) -> bool {
    let mut ok = true;
    visit_quant_types(f, &mut |ty| ok &= ty.is_step_form());
    ok
}

fn visit_quant_types(f: &Formula, visit: &mut impl FnMut(&TypeExpr)) {
    if let Formula::Quant { ty, .. } = f {
        visit(ty);
    }
    for sub in f.subformulas() {
        visit_quant_types(sub, visit);
    }
}

/// The global arity: the widest tuple appearing in any binder, term, or
/// ascription type.
pub fn formula_arity(f: &Formula) -> usize {
    let mut a = 1;
    visit_types(f, &mut |ty| a = a.max(ty.max_tuple_size()));
    a
}

fn visit_types(f: &Formula, visit: &mut impl FnMut(&TypeExpr)) {
    match f {
        Formula::Quant { ty, .. } => visit(ty),
        Formula::Tc { xs, ys, .. } => xs.iter().chain(ys).for_each(|b| visit(&b.ty)),
        Formula::Fix { xs, .. } | Formula::NFix { xs, .. } | Formula::AFix { xs, .. } => {
            xs.iter().for_each(|b| visit(&b.ty))
        }
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => {
            for t in [lhs, rhs] {
                if let Term::Bot(ty) | Term::Top(ty) = t {
                    visit(ty);
                }
            }
            if let Some(ty) = ascription {
                visit(ty);
            }
        }
        Formula::Apply { args, .. } => {
            for t in args {
                if let Term::Bot(ty) | Term::Top(ty) = t {
                    visit(ty);
                }
            }
        }
        _ => {}
    }
    for sub in f.subformulas() {
        visit_types(sub, visit);
    }
}

/// Arity normal form at the formula's own global arity.
pub fn to_anf(f: &Formula) -> Formula {
    to_anf_with(f, formula_arity(f))
}

/// Arity normal form at a given arity: quantified tuple types become
/// `uniform(a, order)`, atoms of re-typed heads pad by repeating the last
/// argument, and padded binders of originally smaller arity are guarded so
/// only padded tuples occur. On prenex input the guard quantifiers are
/// inserted at their order position in the prefix; otherwise they sit at
/// the binder.
pub fn to_anf_with(f: &Formula, a: usize) -> Formula {
    let mut namer = fresh_namer(f);
    if is_prenex(f) {
        let g = anf_prenex(f, a, &mut namer);
        return g;
    }
    anf_rec(f, a, &mut BTreeMap::new(), &mut namer)
}

/// The membership guard for a padded variable: every member tuple repeats
/// its `b`-th component through the padding positions. Returns `None` when
/// no padding happened.
fn pad_guard(
    name: &str,
    a: usize,
    b: usize,
    order: u32,
    namer: &mut Namer,
) -> Option<(Vec<Binder>, Formula)> {
    if b >= a || order < 2 {
        return None;
    }
    let child = TypeExpr::uniform(a, order - 1);
    let row: Vec<String> = (0..a).map(|_| namer.fresh("y")).collect();
    let binders: Vec<Binder> = row
        .iter()
        .map(|n| Binder::new(n.clone(), child.clone()))
        .collect();
    let member = Formula::apply(
        name,
        row.iter().map(|n| Term::var(n.clone())).collect::<Vec<_>>(),
    );
    let copies = Formula::and(
        (b..a)
            .map(|j| Formula::equal(Term::var(row[b - 1].clone()), Term::var(row[j].clone())))
            .collect(),
    );
    Some((binders, member.implies(copies)))
}

struct Retyped {
    a: usize,
}

fn anf_rec(
    f: &Formula,
    a: usize,
    rewritten: &mut BTreeMap<String, Retyped>,
    namer: &mut Namer,
) -> Formula {
    match f {
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            if ty.is_iota() {
                let body =
                    with_shadowed_anf(rewritten, &[var.as_str()], |rw| anf_rec(body, a, rw, namer));
                return Formula::quant(*kind, var.clone(), TypeExpr::Iota, body);
            }
            let order = ty.order();
            let b = ty.arity();
            let old = rewritten.insert(var.clone(), Retyped { a });
            let body = anf_rec(body, a, rewritten, namer);
            match old {
                Some(t) => {
                    rewritten.insert(var.clone(), t);
                }
                None => {
                    rewritten.remove(var);
                }
            }
            let body = match pad_guard(var, a, b, order, namer) {
                Some((binders, guard)) => {
                    let guard = binders
                        .into_iter()
                        .rev()
                        .fold(guard, |acc, g| Formula::forall(g.name, g.ty, acc));
                    match kind {
                        QuantKind::Exists => Formula::and(vec![guard, body]),
                        QuantKind::Forall => guard.implies(body),
                    }
                }
                None => body,
            };
            Formula::quant(*kind, var.clone(), TypeExpr::uniform(a, order), body)
        }
        Formula::Apply { head, args } => match rewritten.get(head) {
            Some(info) => {
                let mut new_args: Vec<Term> =
                    args.iter().map(|t| retype_term_anf(t, info.a)).collect();
                if let Some(last) = new_args.last().cloned() {
                    while new_args.len() < info.a {
                        new_args.push(last.clone());
                    }
                }
                Formula::Apply {
                    head: head.clone(),
                    args: new_args,
                }
            }
            None => Formula::Apply {
                head: head.clone(),
                args: args.iter().map(|t| retype_term_anf(t, a)).collect(),
            },
        },
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => Formula::Equal {
            lhs: retype_term_anf(lhs, a),
            rhs: retype_term_anf(rhs, a),
            ascription: ascription.as_ref().map(|t| anf_type(t, a)),
        },
        Formula::And(cs) => {
            Formula::And(cs.iter().map(|c| anf_rec(c, a, rewritten, namer)).collect())
        }
        Formula::Or(cs) => {
            Formula::Or(cs.iter().map(|c| anf_rec(c, a, rewritten, namer)).collect())
        }
        Formula::Not(c) => anf_rec(c, a, rewritten, namer).not(),
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => {
            let shadow: Vec<&str> = xs.iter().chain(ys).map(|b| b.name.as_str()).collect();
            let body = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body, a, rw, namer));
            Formula::Tc {
                xs: xs.clone(),
                ys: ys.clone(),
                body: Box::new(body),
                from: from.clone(),
                to: to.clone(),
            }
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body, a, rw, namer));
            Formula::Fix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body: Box::new(body),
                args: args.clone(),
            }
        }
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body0 = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body0, a, rw, namer));
            let body1 = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body1, a, rw, namer));
            Formula::NFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(body0),
                body1: Box::new(body1),
                args: args.clone(),
            }
        }
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let mut shadow: Vec<&str> = vec![pred.as_str()];
            shadow.extend(xs.iter().map(|b| b.name.as_str()));
            let body0 = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body0, a, rw, namer));
            let body1 = with_shadowed_anf(rewritten, &shadow, |rw| anf_rec(body1, a, rw, namer));
            Formula::AFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(body0),
                body1: Box::new(body1),
                args: args.clone(),
            }
        }
    }
}

fn with_shadowed_anf<T>(
    map: &mut BTreeMap<String, Retyped>,
    names: &[&str],
    f: impl FnOnce(&mut BTreeMap<String, Retyped>) -> T,
) -> T {
    let saved: Vec<(String, Option<Retyped>)> = names
        .iter()
        .map(|n| (n.to_string(), map.remove(*n)))
        .collect();
    let out = f(map);
    for (name, old) in saved {
        if let Some(t) = old {
            map.insert(name, t);
        }
    }
    out
}

fn anf_type(ty: &TypeExpr, a: usize) -> TypeExpr {
    match ty {
        TypeExpr::Iota => TypeExpr::Iota,
        t => TypeExpr::uniform(a, t.order()),
    }
}

fn retype_term_anf(t: &Term, a: usize) -> Term {
    match t {
        Term::Var(n) => Term::Var(n.clone()),
        Term::Bot(ty) => Term::Bot(anf_type(ty, a)),
        Term::Top(ty) => Term::Top(anf_type(ty, a)),
    }
}

/// Prenex-aware arity normalization: the matrix is rewritten as usual, but
/// pad guards join the matrix and their quantifier rows are inserted into
/// the prefix at their order position, preserving a sorted prefix.
fn anf_prenex(f: &Formula, a: usize, namer: &mut Namer) -> Formula {
    let (prefix, matrix) = quantifier_prefix(f);
    let mut rewritten = BTreeMap::new();
    let mut new_prefix: Vec<(QuantKind, String, TypeExpr)> = Vec::new();
    let mut guards: Vec<(QuantKind, Vec<Binder>, Formula, u32)> = Vec::new();
    for (kind, var, ty) in &prefix {
        if ty.is_iota() {
            new_prefix.push((*kind, var.clone(), TypeExpr::Iota));
            continue;
        }
        let order = ty.order();
        let b = ty.arity();
        rewritten.insert(var.clone(), Retyped { a });
        new_prefix.push((*kind, var.clone(), TypeExpr::uniform(a, order)));
        if let Some((binders, guard)) = pad_guard(var, a, b, order, namer) {
            guards.push((*kind, binders, guard, order - 1));
        }
    }
    let mut matrix = anf_rec(matrix, a, &mut rewritten, namer);
    // Outer guards combine outermost in the matrix.
    for (kind, binders, guard, guard_order) in guards.into_iter().rev() {
        let row_kind = match kind {
            QuantKind::Exists => QuantKind::Forall,
            QuantKind::Forall => QuantKind::Exists,
        };
        matrix = match kind {
            QuantKind::Exists => Formula::and(vec![guard, matrix]),
            QuantKind::Forall => guard.implies(matrix),
        };
        // Insert the guard row after the last prefix entry of order >=
        // guard order.
        let at = new_prefix
            .iter()
            .rposition(|(_, _, t)| t.order() >= guard_order)
            .map(|i| i + 1)
            .unwrap_or(new_prefix.len());
        let rows: Vec<(QuantKind, String, TypeExpr)> = binders
            .into_iter()
            .map(|b| (row_kind, b.name, b.ty))
            .collect();
        for (offset, row) in rows.into_iter().enumerate() {
            new_prefix.insert(at + offset, row);
        }
    }
    rebuild(new_prefix, matrix)
}

/// True when every quantified tuple type equals `uniform(a, order)` for
/// one shared arity `a`.
pub fn is_anf(f: &Formula) -> bool {
    let mut tuple_types = Vec::new();
    visit_quant_types(f, &mut |ty| {
        if !ty.is_iota() {
            tuple_types.push(ty.clone());
        }
    });
    let Some(a) = tuple_types.iter().map(|t| t.arity()).max() else {
        return true;
    };
    tuple_types
        .iter()
        .all(|t| t == &TypeExpr::uniform(a, t.order()))
}

/// True when the formula is prenex with non-increasing quantifier orders.
pub fn is_dnf(f: &Formula) -> bool {
    if !is_prenex(f) {
        return false;
    }
    let (prefix, _) = quantifier_prefix(f);
    prefix.windows(2).all(|w| w[0].2.order() >= w[1].2.order())
}

/// Decreasing normal form: repeatedly swap an adjacent increasing pair of
/// prefix quantifiers, absorbing the outer variable into the inner one's
/// type and prepending it to the inner one's atoms.
///
/// A swap needs every occurrence of the inner variable to be an
/// application head; other occurrences leave that pair in place. Step and
/// arity form are not re-established here; the pipeline interleaves the
/// sort with those rewrites.
pub fn to_dnf(f: &Formula) -> Result<Formula, NormalizeError> {
    if !is_prenex(f) {
        return Err(NormalizeError::NotPrenex);
    }
    Ok(sort_prefix(f))
}

/// One pass of adjacent swaps until no applicable inversion remains.
fn sort_prefix(f: &Formula) -> Formula {
    let (mut prefix, matrix) = quantifier_prefix(f);
    let mut matrix = matrix.clone();
    let mut progress = true;
    while progress {
        progress = false;
        for i in 0..prefix.len().saturating_sub(1) {
            let lower = prefix[i].2.order();
            let higher = prefix[i + 1].2.order();
            if lower >= higher {
                continue;
            }
            let inner_name = prefix[i + 1].1.clone();
            if !only_head_occurrences(&matrix, &inner_name) {
                continue;
            }
            let (outer_kind, outer_var, outer_ty) = prefix[i].clone();
            let (inner_kind, inner_var, inner_ty) = prefix[i + 1].clone();
            let mut children = vec![outer_ty.clone()];
            children.extend(inner_ty.children().iter().cloned());
            let widened = TypeExpr::Tuple(children);
            matrix = prepend_argument(&matrix, &inner_var, &outer_var);
            prefix[i] = (inner_kind, inner_var, widened);
            prefix[i + 1] = (outer_kind, outer_var, outer_ty);
            progress = true;
        }
    }
    rebuild(prefix, matrix)
}

fn only_head_occurrences(f: &Formula, name: &str) -> bool {
    let in_terms = |terms: &[Term]| terms.iter().any(|t| t.var_name() == Some(name));
    match f {
        Formula::Apply { args, .. } => !in_terms(args),
        Formula::Equal { lhs, rhs, .. } => {
            lhs.var_name() != Some(name) && rhs.var_name() != Some(name)
        }
        Formula::Tc { from, to, body, .. } => {
            !in_terms(from) && !in_terms(to) && only_head_occurrences(body, name)
        }
        Formula::Fix { args, body, .. } => !in_terms(args) && only_head_occurrences(body, name),
        Formula::NFix {
            args, body0, body1, ..
        }
        | Formula::AFix {
            args, body0, body1, ..
        } => {
            !in_terms(args)
                && only_head_occurrences(body0, name)
                && only_head_occurrences(body1, name)
        }
        other => other
            .subformulas()
            .iter()
            .all(|c| only_head_occurrences(c, name)),
    }
}

fn prepend_argument(f: &Formula, head: &str, new_first: &str) -> Formula {
    match f {
        Formula::Apply { head: h, args } if h == head => {
            let mut new_args = vec![Term::var(new_first)];
            new_args.extend(args.iter().cloned());
            Formula::Apply {
                head: h.clone(),
                args: new_args,
            }
        }
        Formula::Apply { .. } | Formula::Equal { .. } => f.clone(),
        Formula::And(cs) => Formula::And(
            cs.iter()
                .map(|c| prepend_argument(c, head, new_first))
                .collect(),
        ),
        Formula::Or(cs) => Formula::Or(
            cs.iter()
                .map(|c| prepend_argument(c, head, new_first))
                .collect(),
        ),
        Formula::Not(c) => prepend_argument(c, head, new_first).not(),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => Formula::Quant {
            kind: *kind,
            var: var.clone(),
            ty: ty.clone(),
            body: Box::new(prepend_argument(body, head, new_first)),
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
            body: Box::new(prepend_argument(body, head, new_first)),
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
            body: Box::new(prepend_argument(body, head, new_first)),
            args: args.clone(),
        },
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => Formula::NFix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body0: Box::new(prepend_argument(body0, head, new_first)),
            body1: Box::new(prepend_argument(body1, head, new_first)),
            args: args.clone(),
        },
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => Formula::AFix {
            kind: *kind,
            pred: pred.clone(),
            xs: xs.clone(),
            body0: Box::new(prepend_argument(body0, head, new_first)),
            body1: Box::new(prepend_argument(body1, head, new_first)),
            args: args.clone(),
        },
    }
}

/// True when every operator occurrence is in the normal shape: transitive
/// closure applied at (all-bottom; all-top), fixed points applied at
/// all-bottom, with operator-free bodies, and no nesting.
pub fn check_operator_nf(f: &Formula) -> bool {
    fn all_bot(terms: &[Term]) -> bool {
        terms.iter().all(|t| matches!(t, Term::Bot(_)))
    }
    fn all_top(terms: &[Term]) -> bool {
        terms.iter().all(|t| matches!(t, Term::Top(_)))
    }
    match f {
        Formula::Tc { body, from, to, .. } => all_bot(from) && all_top(to) && body.operator_free(),
        Formula::Fix { body, args, .. } => all_bot(args) && body.operator_free(),
        Formula::NFix {
            body0, body1, args, ..
        }
        | Formula::AFix {
            body0, body1, args, ..
        } => all_bot(args) && body0.operator_free() && body1.operator_free(),
        other => other.subformulas().iter().all(|c| check_operator_nf(c)),
    }
}

/// True when every quantified or operator-bound relation type lies on the
/// monadic chain; offenders are returned with their types. Vocabulary
/// symbols are unrestricted.
pub fn monadic_lint(f: &Formula) -> (bool, Vec<(String, TypeExpr)>) {
    let mut offenders = Vec::new();
    fn walk(f: &Formula, out: &mut Vec<(String, TypeExpr)>) {
        match f {
            Formula::Quant { var, ty, .. } => {
                if !ty.is_monadic_chain() {
                    out.push((var.clone(), ty.clone()));
                }
            }
            Formula::Tc { xs, ys, .. } => {
                for b in xs.iter().chain(ys) {
                    if !b.ty.is_monadic_chain() {
                        out.push((b.name.clone(), b.ty.clone()));
                    }
                }
            }
            Formula::Fix { pred, xs, .. }
            | Formula::NFix { pred, xs, .. }
            | Formula::AFix { pred, xs, .. } => {
                let pred_ty = TypeExpr::Tuple(xs.iter().map(|b| b.ty.clone()).collect());
                if !pred_ty.is_monadic_chain() {
                    out.push((pred.clone(), pred_ty));
                }
            }
            _ => {}
        }
        for sub in f.subformulas() {
            walk(sub, out);
        }
    }
    walk(f, &mut offenders);
    (offenders.is_empty(), offenders)
}

/// The full pipeline: alpha, prefix, step, arity (with a prefix
/// re-extraction), then decreasing form.
pub fn full_pipeline(f: &Formula) -> Result<Formula, NormalizeError> {
    Ok(pipeline_stages(f)?.pop().expect("pipeline has stages").1)
}

const PIPELINE_ROUNDS: usize = 64;

/// The pipeline with all intermediate stage outputs, labelled. The final
/// stage interleaves prefix sorting with step/arity restoration until the
/// formula stabilizes, since a sorting swap can widen a type out of step
/// form and the repaired form can expose new inversions.
pub fn pipeline_stages(f: &Formula) -> Result<Vec<(&'static str, Formula)>, NormalizeError> {
    let alpha = crate::formula::alpha_rename(f);
    let r = top_order(&alpha);
    let pnf = to_pnf(r, &alpha);
    let snf = {
        let stepped = to_snf(&pnf);
        to_pnf(top_order(&stepped), &stepped)
    };
    let anf = {
        let padded = to_anf(&snf);
        to_pnf(top_order(&padded), &padded)
    };
    let mut dnf = anf.clone();
    let mut settled = false;
    for _ in 0..PIPELINE_ROUNDS {
        let sorted = to_dnf(&dnf)?;
        let stepped = to_snf(&sorted);
        let extracted = to_pnf(top_order(&stepped), &stepped);
        let padded = to_anf(&extracted);
        let next = to_pnf(top_order(&padded), &padded);
        if next == dnf {
            settled = true;
            break;
        }
        dnf = next;
    }
    if !settled {
        return Err(NormalizeError::NoFixpoint(PIPELINE_ROUNDS));
    }
    Ok(vec![
        ("alpha", alpha),
        ("pnf", pnf),
        ("snf", snf),
        ("anf", anf),
        ("dnf", dnf),
    ])
}

fn top_order(f: &Formula) -> u32 {
    quantifier_prefix(f)
        .0
        .iter()
        .map(|(_, _, t)| t.order())
        .max()
        .unwrap_or_else(|| {
            let mut m = 1;
            visit_quant_types(f, &mut |t| m = m.max(t.order()));
            m
        })
}

/// Report for a pipeline run: flags of the output plus block counts on
/// both ends.
pub fn report(input: &Formula, output: &Formula) -> NormalFormReport {
    NormalFormReport {
        pnf: is_prenex(output),
        snf: is_snf(output),
        anf: is_anf(output),
        dnf: is_dnf(output),
        operator_nf: check_operator_nf(output),
        blocks_before: blocks_by_order(input),
        blocks_after: blocks_by_order(output),
    }
}

/// Wraps a formula so vocabulary symbols of smaller arity are replaced by
/// quantified padded copies: `forall S ((copy(R, S) /\ ...) -> f[R := S])`.
/// Requires uniform vocabulary types.
pub fn anf_wrap_structure(f: &Formula, vocab: &Vocabulary) -> Result<Formula, NormalizeError> {
    if vocab.is_empty() {
        return Ok(to_anf(f));
    }
    let mut a = formula_arity(f);
    for (_, ty) in vocab.iter() {
        a = a.max(ty.max_tuple_size());
    }
    let f = to_anf_with(f, a);
    let mut namer = fresh_namer(&f);
    let mut substitutions = Vec::new();
    for (name, ty) in vocab.iter() {
        if !ty.is_uniform() {
            return Err(NormalizeError::NonUniformSymbol {
                name: name.to_string(),
                ty: ty.clone(),
            });
        }
        let copy_name = namer.fresh(&format!("{name}_pad"));
        substitutions.push((name.to_string(), ty.clone(), copy_name));
    }
    let mut body = substitutions.iter().fold(f, |acc, (orig, _, fresh)| {
        rename_free_symbol(&acc, orig, fresh)
    });
    let copies = Formula::and(
        substitutions
            .iter()
            .map(|(orig, ty, fresh)| copy_formula(orig, ty, fresh, a, &mut namer))
            .collect::<Vec<_>>(),
    );
    body = copies.implies(body);
    for (_, ty, fresh) in substitutions.into_iter().rev() {
        let target_ty = anf_type(&ty, a);
        body = Formula::forall(fresh, target_ty, body);
    }
    Ok(body)
}

/// `copy(R, S)`: `S` is the arity-`a` padding of `R`, level by level.
fn copy_formula(
    orig: &str,
    orig_ty: &TypeExpr,
    padded: &str,
    a: usize,
    namer: &mut Namer,
) -> Formula {
    let r = orig_ty.order();
    if r == 1 {
        return Formula::equal(Term::var(orig), Term::var(padded));
    }
    let b = orig_ty.arity();
    copy_level(orig, b, padded, a, r, namer)
}

fn copy_level(orig: &str, b: usize, padded: &str, a: usize, r: u32, namer: &mut Namer) -> Formula {
    // encode guard on the padded symbol.
    let guard = match pad_guard(padded, a, b, r, namer) {
        Some((binders, guard)) => binders
            .into_iter()
            .rev()
            .fold(guard, |acc, g| Formula::forall(g.name, g.ty, acc)),
        None => Formula::truth(),
    };
    if r == 2 {
        // copy bottoms out elementwise: R(y...) <-> S(y..., padded).
        let row: Vec<String> = (0..b).map(|_| namer.fresh("y")).collect();
        let mut padded_args: Vec<Term> = row.iter().map(|n| Term::var(n.clone())).collect();
        let last = padded_args.last().cloned().expect("positive arity");
        while padded_args.len() < a {
            padded_args.push(last.clone());
        }
        let lhs = Formula::apply(
            orig,
            row.iter().map(|n| Term::var(n.clone())).collect::<Vec<_>>(),
        );
        let rhs = Formula::Apply {
            head: padded.to_string(),
            args: padded_args,
        };
        let both = Formula::and(vec![lhs.clone().implies(rhs.clone()), rhs.implies(lhs)]);
        let body = row
            .into_iter()
            .rev()
            .fold(both, |acc, name| Formula::forall(name, TypeExpr::Iota, acc));
        return Formula::and(vec![guard, body]);
    }
    // Higher orders: members of R correspond to padded copies of their
    // components inside S.
    let src_child = TypeExpr::uniform(b, r - 1);
    let dst_child = TypeExpr::uniform(a, r - 1);
    let ys: Vec<String> = (0..b).map(|_| namer.fresh("y")).collect();
    let zs: Vec<String> = (0..b).map(|_| namer.fresh("z")).collect();
    let component_copies = Formula::and(
        ys.iter()
            .zip(&zs)
            .map(|(y, z)| copy_level(y, b, z, a, r - 1, namer))
            .collect(),
    );
    let mut padded_args: Vec<Term> = zs.iter().map(|n| Term::var(n.clone())).collect();
    let last = padded_args.last().cloned().expect("positive arity");
    while padded_args.len() < a {
        padded_args.push(last.clone());
    }
    let membership = Formula::Apply {
        head: padded.to_string(),
        args: padded_args,
    };
    let inner = zs
        .iter()
        .rev()
        .fold(component_copies.implies(membership), |acc, z| {
            Formula::forall(z.clone(), dst_child.clone(), acc)
        });
    let lhs = Formula::apply(
        orig,
        ys.iter().map(|n| Term::var(n.clone())).collect::<Vec<_>>(),
    );
    let both = Formula::and(vec![lhs.clone().implies(inner.clone()), inner.implies(lhs)]);
    let body = ys
        .into_iter()
        .rev()
        .fold(both, |acc, y| Formula::forall(y, src_child.clone(), acc));
    Formula::and(vec![guard, body])
}

fn rename_free_symbol(f: &Formula, from: &str, to: &str) -> Formula {
    let term = |t: &Term| match t {
        Term::Var(n) if n == from => Term::var(to),
        other => other.clone(),
    };
    match f {
        Formula::Apply { head, args } => Formula::Apply {
            head: if head == from {
                to.to_string()
            } else {
                head.clone()
            },
            args: args.iter().map(term).collect(),
        },
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => Formula::Equal {
            lhs: term(lhs),
            rhs: term(rhs),
            ascription: ascription.clone(),
        },
        Formula::And(cs) => {
            Formula::And(cs.iter().map(|c| rename_free_symbol(c, from, to)).collect())
        }
        Formula::Or(cs) => {
            Formula::Or(cs.iter().map(|c| rename_free_symbol(c, from, to)).collect())
        }
        Formula::Not(c) => rename_free_symbol(c, from, to).not(),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            if var == from {
                f.clone()
            } else {
                Formula::Quant {
                    kind: *kind,
                    var: var.clone(),
                    ty: ty.clone(),
                    body: Box::new(rename_free_symbol(body, from, to)),
                }
            }
        }
        Formula::Tc {
            xs,
            ys,
            body,
            from: fr,
            to: t,
        } => {
            let shadowed = xs.iter().chain(ys).any(|b| b.name == from);
            Formula::Tc {
                xs: xs.clone(),
                ys: ys.clone(),
                body: Box::new(if shadowed {
                    (**body).clone()
                } else {
                    rename_free_symbol(body, from, to)
                }),
                from: fr.iter().map(term).collect(),
                to: t.iter().map(term).collect(),
            }
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let shadowed = pred == from || xs.iter().any(|b| b.name == from);
            Formula::Fix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body: Box::new(if shadowed {
                    (**body).clone()
                } else {
                    rename_free_symbol(body, from, to)
                }),
                args: args.iter().map(term).collect(),
            }
        }
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let shadowed = pred == from || xs.iter().any(|b| b.name == from);
            let map = |b: &Formula| {
                if shadowed {
                    b.clone()
                } else {
                    rename_free_symbol(b, from, to)
                }
            };
            Formula::NFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(map(body0)),
                body1: Box::new(map(body1)),
                args: args.iter().map(term).collect(),
            }
        }
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let shadowed = pred == from || xs.iter().any(|b| b.name == from);
            let map = |b: &Formula| {
                if shadowed {
                    b.clone()
                } else {
                    rename_free_symbol(b, from, to)
                }
            };
            Formula::AFix {
                kind: *kind,
                pred: pred.clone(),
                xs: xs.clone(),
                body0: Box::new(map(body0)),
                body1: Box::new(map(body1)),
                args: args.iter().map(term).collect(),
            }
        }
    }
}
