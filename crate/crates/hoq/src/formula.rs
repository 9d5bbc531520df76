//! The formula AST: connectives, typed quantifiers, equality and
//! application atoms, and the seven closure/fixed-point operators.

use std::collections::BTreeSet;

use crate::types::TypeExpr;

/// A term in argument position: a variable reference or one of the constant
/// relations of a type (`bot:T` is empty, `top:T` is full; at type `i` they
/// read as the least and greatest element).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Bot(TypeExpr),
    Top(TypeExpr),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn var_name(&self) -> Option<&str> {
        match self {
            Term::Var(name) => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantKind {
    Forall,
    Exists,
}

impl QuantKind {
    pub fn dual(self) -> QuantKind {
        match self {
            QuantKind::Forall => QuantKind::Exists,
            QuantKind::Exists => QuantKind::Forall,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixKind {
    Pfp,
    Ifp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NFixKind {
    Npfp,
    Nifp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AFixKind {
    Apfp,
    Aifp,
}

/// A typed binder, as it appears in quantifiers and operator headers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binder {
    pub name: String,
    pub ty: TypeExpr,
}

impl Binder {
    pub fn new(name: impl Into<String>, ty: TypeExpr) -> Binder {
        Binder {
            name: name.into(),
            ty,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `X(t1, ..., tk)` — membership of a tuple in the relation bound to
    /// the head.
    Apply {
        head: String,
        args: Vec<Term>,
    },
    /// `s = t`, optionally written `s =:T t` to pin the shared type.
    Equal {
        lhs: Term,
        rhs: Term,
        ascription: Option<TypeExpr>,
    },
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Quant {
        kind: QuantKind,
        var: String,
        ty: TypeExpr,
        body: Box<Formula>,
    },
    /// `TC[xs; ys : body](from; to)` — transitive closure of the step
    /// relation defined by `body` over tuples typed like `xs`/`ys`.
    Tc {
        xs: Vec<Binder>,
        ys: Vec<Binder>,
        body: Box<Formula>,
        from: Vec<Term>,
        to: Vec<Term>,
    },
    /// `PFP[P, xs : body](args)` and `IFP[...]`.
    Fix {
        kind: FixKind,
        pred: String,
        xs: Vec<Binder>,
        body: Box<Formula>,
        args: Vec<Term>,
    },
    /// `NPFP[P, xs : body0 ; body1](args)` and `NIFP[...]`.
    NFix {
        kind: NFixKind,
        pred: String,
        xs: Vec<Binder>,
        body0: Box<Formula>,
        body1: Box<Formula>,
        args: Vec<Term>,
    },
    /// `APFP[P, xs : body0 ; body1](args)` and `AIFP[...]`.
    AFix {
        kind: AFixKind,
        pred: String,
        xs: Vec<Binder>,
        body0: Box<Formula>,
        body1: Box<Formula>,
        args: Vec<Term>,
    },
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(children: Vec<Formula>) -> Formula {
        assert!(
            !children.is_empty(),
            "empty conjunction; use Formula::truth"
        );
        if children.len() == 1 {
            children.into_iter().next().unwrap()
        } else {
            Formula::And(children)
        }
    }

    pub fn or(children: Vec<Formula>) -> Formula {
        assert!(
            !children.is_empty(),
            "empty disjunction; use Formula::falsity"
        );
        if children.len() == 1 {
            children.into_iter().next().unwrap()
        } else {
            Formula::Or(children)
        }
    }

    /// `a -> b` desugared.
    pub fn implies(self, other: Formula) -> Formula {
        Formula::or(vec![self.not(), other])
    }

    /// A quantifier-free tautology: `bot:i = bot:i`.
    pub fn truth() -> Formula {
        Formula::Equal {
            lhs: Term::Bot(TypeExpr::Iota),
            rhs: Term::Bot(TypeExpr::Iota),
            ascription: None,
        }
    }

    pub fn falsity() -> Formula {
        Formula::truth().not()
    }

    pub fn quant(kind: QuantKind, var: impl Into<String>, ty: TypeExpr, body: Formula) -> Formula {
        Formula::Quant {
            kind,
            var: var.into(),
            ty,
            body: Box::new(body),
        }
    }

    pub fn exists(var: impl Into<String>, ty: TypeExpr, body: Formula) -> Formula {
        Formula::quant(QuantKind::Exists, var, ty, body)
    }

    pub fn forall(var: impl Into<String>, ty: TypeExpr, body: Formula) -> Formula {
        Formula::quant(QuantKind::Forall, var, ty, body)
    }

    pub fn apply(head: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Apply {
            head: head.into(),
            args,
        }
    }

    pub fn equal(lhs: Term, rhs: Term) -> Formula {
        Formula::Equal {
            lhs,
            rhs,
            ascription: None,
        }
    }

    /// Direct subformulas, operator bodies included.
    pub fn subformulas(&self) -> Vec<&Formula> {
        match self {
            Formula::Apply { .. } | Formula::Equal { .. } => Vec::new(),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().collect(),
            Formula::Not(c) => vec![c],
            Formula::Quant { body, .. } => vec![body],
            Formula::Tc { body, .. } => vec![body],
            Formula::Fix { body, .. } => vec![body],
            Formula::NFix { body0, body1, .. } | Formula::AFix { body0, body1, .. } => {
                vec![body0, body1]
            }
        }
    }

    /// True when the formula contains no operator nodes.
    pub fn operator_free(&self) -> bool {
        match self {
            Formula::Tc { .. }
            | Formula::Fix { .. }
            | Formula::NFix { .. }
            | Formula::AFix { .. } => false,
            other => other.subformulas().iter().all(|f| f.operator_free()),
        }
    }

    /// Names with at least one free occurrence. Operator binders shadow
    /// inside their bodies; argument tuples are in the outer scope.
    pub fn free_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            if let Term::Var(name) = t {
                if !bound.iter().any(|b| b == name) {
                    out.insert(name.clone());
                }
            }
        };
        match self {
            Formula::Apply { head, args } => {
                term(&Term::Var(head.clone()), bound, out);
                for a in args {
                    term(a, bound, out);
                }
            }
            Formula::Equal { lhs, rhs, .. } => {
                term(lhs, bound, out);
                term(rhs, bound, out);
            }
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    c.collect_free(bound, out);
                }
            }
            Formula::Not(c) => c.collect_free(bound, out),
            Formula::Quant { var, body, .. } => {
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Tc {
                xs,
                ys,
                body,
                from,
                to,
            } => {
                for t in from.iter().chain(to) {
                    term(t, bound, out);
                }
                let depth = bound.len();
                bound.extend(xs.iter().chain(ys).map(|b| b.name.clone()));
                body.collect_free(bound, out);
                bound.truncate(depth);
            }
            Formula::Fix {
                pred,
                xs,
                body,
                args,
                ..
            } => {
                for t in args {
                    term(t, bound, out);
                }
                let depth = bound.len();
                bound.push(pred.clone());
                bound.extend(xs.iter().map(|b| b.name.clone()));
                body.collect_free(bound, out);
                bound.truncate(depth);
            }
            Formula::NFix {
                pred,
                xs,
                body0,
                body1,
                args,
                ..
            }
            | Formula::AFix {
                pred,
                xs,
                body0,
                body1,
                args,
                ..
            } => {
                for t in args {
                    term(t, bound, out);
                }
                let depth = bound.len();
                bound.push(pred.clone());
                bound.extend(xs.iter().map(|b| b.name.clone()));
                body0.collect_free(bound, out);
                body1.collect_free(bound, out);
                bound.truncate(depth);
            }
        }
    }

    /// All binder names, in pre-order.
    pub fn bound_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk_binders(&mut |name| out.push(name.to_string()));
        out
    }

    fn walk_binders(&self, visit: &mut impl FnMut(&str)) {
        match self {
            Formula::Quant { var, body, .. } => {
                visit(var);
                body.walk_binders(visit);
            }
            Formula::Tc { xs, ys, body, .. } => {
                for b in xs.iter().chain(ys) {
                    visit(&b.name);
                }
                body.walk_binders(visit);
            }
            Formula::Fix { pred, xs, body, .. } => {
                visit(pred);
                for b in xs {
                    visit(&b.name);
                }
                body.walk_binders(visit);
            }
            Formula::NFix {
                pred,
                xs,
                body0,
                body1,
                ..
            }
            | Formula::AFix {
                pred,
                xs,
                body0,
                body1,
                ..
            } => {
                visit(pred);
                for b in xs {
                    visit(&b.name);
                }
                body0.walk_binders(visit);
                body1.walk_binders(visit);
            }
            other => {
                for f in other.subformulas() {
                    f.walk_binders(visit);
                }
            }
        }
    }

    /// Largest order among quantified and operator-bound variable types;
    /// 0 when nothing is bound.
    pub fn max_bound_order(&self) -> u32 {
        let own = match self {
            Formula::Quant { ty, .. } => ty.order(),
            Formula::Tc { xs, ys, .. } => {
                xs.iter().chain(ys).map(|b| b.ty.order()).max().unwrap_or(0)
            }
            // P has the tuple type of xs, one order above its components.
            Formula::Fix { xs, .. } | Formula::NFix { xs, .. } | Formula::AFix { xs, .. } => {
                xs.iter().map(|b| b.ty.order()).max().unwrap_or(0) + 1
            }
            _ => 0,
        };
        self.subformulas()
            .iter()
            .map(|f| f.max_bound_order())
            .max()
            .unwrap_or(0)
            .max(own)
    }
}

/// Renames bound variables so all binder names are pairwise distinct and
/// distinct from every free name. Renaming is deterministic: binders are
/// visited in pre-order and a clashing name gets the smallest unused
/// numeric suffix. Semantics are preserved.
pub fn alpha_rename(formula: &Formula) -> Formula {
    let mut used: BTreeSet<String> = formula.free_names();
    let mut subst: Vec<(String, String)> = Vec::new();
    rename_rec(formula, &mut used, &mut subst)
}

fn pick_name(base: &str, used: &mut BTreeSet<String>) -> String {
    if used.insert(base.to_string()) {
        return base.to_string();
    }
    // Strip a trailing numeric suffix so x1 clashes continue at x2, not x11.
    let stem: &str = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { base } else { stem };
    let mut k = 1usize;
    loop {
        let candidate = format!("{stem}{k}");
        if used.insert(candidate.clone()) {
            return candidate;
        }
        k += 1;
    }
}

fn rename_term(t: &Term, subst: &[(String, String)]) -> Term {
    match t {
        Term::Var(name) => {
            let new = subst
                .iter()
                .rev()
                .find(|(old, _)| old == name)
                .map(|(_, new)| new.clone())
                .unwrap_or_else(|| name.clone());
            Term::Var(new)
        }
        other => other.clone(),
    }
}

fn rename_binders(
    binders: &[Binder],
    used: &mut BTreeSet<String>,
    subst: &mut Vec<(String, String)>,
) -> Vec<Binder> {
    binders
        .iter()
        .map(|b| {
            let fresh = pick_name(&b.name, used);
            subst.push((b.name.clone(), fresh.clone()));
            Binder::new(fresh, b.ty.clone())
        })
        .collect()
}

fn rename_rec(
    f: &Formula,
    used: &mut BTreeSet<String>,
    subst: &mut Vec<(String, String)>,
) -> Formula {
    match f {
        Formula::Apply { head, args } => Formula::Apply {
            head: match rename_term(&Term::Var(head.clone()), subst) {
                Term::Var(n) => n,
                _ => unreachable!(),
            },
            args: args.iter().map(|a| rename_term(a, subst)).collect(),
        },
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => Formula::Equal {
            lhs: rename_term(lhs, subst),
            rhs: rename_term(rhs, subst),
            ascription: ascription.clone(),
        },
        Formula::And(cs) => Formula::And(cs.iter().map(|c| rename_rec(c, used, subst)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| rename_rec(c, used, subst)).collect()),
        Formula::Not(c) => rename_rec(c, used, subst).not(),
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            let fresh = pick_name(var, used);
            subst.push((var.clone(), fresh.clone()));
            let body = rename_rec(body, used, subst);
            subst.pop();
            Formula::Quant {
                kind: *kind,
                var: fresh,
                ty: ty.clone(),
                body: Box::new(body),
            }
        }
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => {
            let from = from.iter().map(|t| rename_term(t, subst)).collect();
            let to = to.iter().map(|t| rename_term(t, subst)).collect();
            let depth = subst.len();
            let xs = rename_binders(xs, used, subst);
            let ys = rename_binders(ys, used, subst);
            let body = rename_rec(body, used, subst);
            subst.truncate(depth);
            Formula::Tc {
                xs,
                ys,
                body: Box::new(body),
                from,
                to,
            }
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let args = args.iter().map(|t| rename_term(t, subst)).collect();
            let depth = subst.len();
            let fresh_pred = pick_name(pred, used);
            subst.push((pred.clone(), fresh_pred.clone()));
            let xs = rename_binders(xs, used, subst);
            let body = rename_rec(body, used, subst);
            subst.truncate(depth);
            Formula::Fix {
                kind: *kind,
                pred: fresh_pred,
                xs,
                body: Box::new(body),
                args,
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
            let args = args.iter().map(|t| rename_term(t, subst)).collect();
            let depth = subst.len();
            let fresh_pred = pick_name(pred, used);
            subst.push((pred.clone(), fresh_pred.clone()));
            let xs = rename_binders(xs, used, subst);
            let body0 = rename_rec(body0, used, subst);
            let body1 = rename_rec(body1, used, subst);
            subst.truncate(depth);
            Formula::NFix {
                kind: *kind,
                pred: fresh_pred,
                xs,
                body0: Box::new(body0),
                body1: Box::new(body1),
                args,
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
            let args = args.iter().map(|t| rename_term(t, subst)).collect();
            let depth = subst.len();
            let fresh_pred = pick_name(pred, used);
            subst.push((pred.clone(), fresh_pred.clone()));
            let xs = rename_binders(xs, used, subst);
            let body0 = rename_rec(body0, used, subst);
            let body1 = rename_rec(body1, used, subst);
            subst.truncate(depth);
            Formula::AFix {
                kind: *kind,
                pred: fresh_pred,
                xs,
                body0: Box::new(body0),
                body1: Box::new(body1),
                args,
            }
        }
    }
}

/// True when binder names are pairwise distinct and disjoint from the free
/// names (the precondition of the prefix-extraction rewrites).
pub fn has_distinct_names(formula: &Formula) -> bool {
    let bound = formula.bound_names();
    let mut seen = formula.free_names();
    bound.into_iter().all(|name| seen.insert(name))
}
