//! Scope and type checking.
//!
//! Every binder carries its type, so checking is a single walk: resolve
//! each occurrence innermost-first, match application heads against
//! argument types, require equality to relate values of one type, and
//! reject nondeterministic fixed points under an odd number of negations.

use crate::error::TypeError;
use crate::formula::{Binder, Formula, Term};
use crate::structure::Vocabulary;
use crate::types::TypeExpr;

/// The result of a successful check: the types of all term occurrences in
/// pre-order. Re-annotating a checked formula yields the identical vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annotation {
    pub term_types: Vec<TypeExpr>,
}

struct Checker<'a> {
    vocab: &'a Vocabulary,
    scope: Vec<(String, TypeExpr)>,
    path: Vec<usize>,
    negations: u32,
    errors: Vec<TypeError>,
    term_types: Vec<TypeExpr>,
}

impl<'a> Checker<'a> {
    fn location(&self) -> String {
        if self.path.is_empty() {
            "/".to_string()
        } else {
            self.path.iter().map(|i| format!("/{i}")).collect()
        }
    }

    fn lookup(&self, name: &str) -> Option<TypeExpr> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t.clone())
            .or_else(|| self.vocab.get(name).cloned())
    }

    fn term(&mut self, t: &Term) -> Option<TypeExpr> {
        let ty = match t {
            Term::Var(name) => match self.lookup(name) {
                Some(ty) => ty,
                None => {
                    self.errors.push(TypeError::UnboundVariable {
                        name: name.clone(),
                        location: self.location(),
                    });
                    return None;
                }
            },
            Term::Bot(ty) | Term::Top(ty) => ty.clone(),
        };
        self.term_types.push(ty.clone());
        Some(ty)
    }

    fn check_args(&mut self, expected: &[TypeExpr], args: &[Term]) {
        if expected.len() != args.len() {
            self.errors.push(TypeError::ArityMismatch {
                location: self.location(),
                expected: expected.len(),
                found: args.len(),
            });
        }
        for (arg, want) in args.iter().zip(expected) {
            if let Some(found) = self.term(arg) {
                if &found != want {
                    self.errors.push(TypeError::TypeMismatch {
                        location: self.location(),
                        expected: want.clone(),
                        found,
                    });
                }
            }
        }
        // Annotate surplus arguments too, so the vector stays positional.
        for arg in args.iter().skip(expected.len()) {
            self.term(arg);
        }
    }

    fn with_binders<T>(&mut self, binders: &[Binder], f: impl FnOnce(&mut Self) -> T) -> T {
        let depth = self.scope.len();
        self.scope
            .extend(binders.iter().map(|b| (b.name.clone(), b.ty.clone())));
        let out = f(self);
        self.scope.truncate(depth);
        out
    }

    fn check(&mut self, f: &Formula) {
        match f {
            Formula::Apply { head, args } => {
                let head_ty = match self.lookup(head) {
                    Some(t) => t,
                    None => {
                        self.errors.push(TypeError::UnboundVariable {
                            name: head.clone(),
                            location: self.location(),
                        });
                        for a in args {
                            self.term(a);
                        }
                        return;
                    }
                };
                self.term_types.push(head_ty.clone());
                match head_ty {
                    TypeExpr::Iota => {
                        self.errors.push(TypeError::AppliedElement {
                            name: head.clone(),
                            location: self.location(),
                        });
                        for a in args {
                            self.term(a);
                        }
                    }
                    TypeExpr::Tuple(children) => self.check_args(&children, args),
                }
            }
            Formula::Equal {
                lhs,
                rhs,
                ascription,
            } => {
                let lt = self.term(lhs);
                let rt = self.term(rhs);
                if let (Some(lt), Some(rt)) = (lt, rt) {
                    if lt != rt {
                        self.errors.push(TypeError::TypeMismatch {
                            location: self.location(),
                            expected: lt.clone(),
                            found: rt,
                        });
                    } else if let Some(asc) = ascription {
                        if asc != &lt {
                            self.errors.push(TypeError::TypeMismatch {
                                location: self.location(),
                                expected: asc.clone(),
                                found: lt,
                            });
                        }
                    }
                }
            }
            Formula::And(cs) | Formula::Or(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    self.path.push(i);
                    self.check(c);
                    self.path.pop();
                }
            }
            Formula::Not(c) => {
                self.negations += 1;
                self.path.push(0);
                self.check(c);
                self.path.pop();
                self.negations -= 1;
            }
            Formula::Quant { var, ty, body, .. } => {
                self.with_binders(&[Binder::new(var.clone(), ty.clone())], |me| {
                    me.path.push(0);
                    me.check(body);
                    me.path.pop();
                });
            }
            Formula::Tc {
                xs,
                ys,
                body,
                from,
                to,
            } => {
                let xt: Vec<_> = xs.iter().map(|b| b.ty.clone()).collect();
                let yt: Vec<_> = ys.iter().map(|b| b.ty.clone()).collect();
                if xt != yt {
                    self.errors.push(TypeError::OperatorShape {
                        location: self.location(),
                    });
                }
                self.check_args(&xt, from);
                self.check_args(&yt, to);
                let all: Vec<Binder> = xs.iter().chain(ys).cloned().collect();
                self.with_binders(&all, |me| {
                    me.path.push(0);
                    me.check(body);
                    me.path.pop();
                });
            }
            Formula::Fix {
                pred,
                xs,
                body,
                args,
                ..
            } => {
                let xt: Vec<_> = xs.iter().map(|b| b.ty.clone()).collect();
                self.check_args(&xt, args);
                let mut all = vec![Binder::new(pred.clone(), TypeExpr::Tuple(xt))];
                all.extend(xs.iter().cloned());
                self.with_binders(&all, |me| {
                    me.path.push(0);
                    me.check(body);
                    me.path.pop();
                });
            }
            Formula::NFix {
                pred,
                xs,
                body0,
                body1,
                args,
                ..
            } => {
                if self.negations % 2 == 1 {
                    self.errors
                        .push(TypeError::NegatedNondeterministicFixpoint {
                            location: self.location(),
                        });
                }
                let xt: Vec<_> = xs.iter().map(|b| b.ty.clone()).collect();
                self.check_args(&xt, args);
                let mut all = vec![Binder::new(pred.clone(), TypeExpr::Tuple(xt))];
                all.extend(xs.iter().cloned());
                self.with_binders(&all, |me| {
                    for (i, body) in [body0, body1].into_iter().enumerate() {
                        me.path.push(i);
                        me.check(body);
                        me.path.pop();
                    }
                });
            }
            Formula::AFix {
                pred,
                xs,
                body0,
                body1,
                args,
                ..
            } => {
                let xt: Vec<_> = xs.iter().map(|b| b.ty.clone()).collect();
                self.check_args(&xt, args);
                let mut all = vec![Binder::new(pred.clone(), TypeExpr::Tuple(xt))];
                all.extend(xs.iter().cloned());
                self.with_binders(&all, |me| {
                    for (i, body) in [body0, body1].into_iter().enumerate() {
                        me.path.push(i);
                        me.check(body);
                        me.path.pop();
                    }
                });
            }
        }
    }
}

/// Checks scoping and typing of a formula against a vocabulary, returning
/// the per-occurrence annotation or the full list of violations.
pub fn typecheck(f: &Formula, vocab: &Vocabulary) -> Result<Annotation, Vec<TypeError>> {
    let mut checker = Checker {
        vocab,
        scope: Vec::new(),
        path: Vec::new(),
        negations: 0,
        errors: Vec::new(),
        term_types: Vec::new(),
    };
    checker.check(f);
    if checker.errors.is_empty() {
        Ok(Annotation {
            term_types: checker.term_types,
        })
    } else {
        Err(checker.errors)
    }
}

pub fn well_typed(f: &Formula, vocab: &Vocabulary) -> bool {
    typecheck(f, vocab).is_ok()
}

/// The type of a term under a vocabulary with no local binders in scope.
pub fn free_term_type(t: &Term, vocab: &Vocabulary) -> Option<TypeExpr> {
    match t {
        Term::Var(name) => vocab.get(name).cloned(),
        Term::Bot(ty) | Term::Top(ty) => Some(ty.clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_formula;

    fn vocab(pairs: &[(&str, &str)]) -> Vocabulary {
        Vocabulary::new(
            pairs
                .iter()
                .map(|(n, t)| (n.to_string(), crate::parse::parse_type(t).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn simple_identity_checks() {
        let f = parse_formula("exists x:i. x = x").unwrap();
        assert!(typecheck(&f, &Vocabulary::empty()).is_ok());
    }

    #[test]
    fn arity_mismatch_detected() {
        let v = vocab(&[("X", "(i,i)"), ("y", "i")]);
        let f = parse_formula("X(y)").unwrap();
        let errs = typecheck(&f, &v).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, TypeError::ArityMismatch { .. })));
    }

    #[test]
    fn negated_npfp_rejected() {
        let f = parse_formula("!(NPFP[P, x:i : P(x) ; P(x)](y))").unwrap();
        let v = vocab(&[("y", "i")]);
        let errs = typecheck(&f, &v).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, TypeError::NegatedNondeterministicFixpoint { .. })));
        // An even number of negations is fine.
        let g = parse_formula("!!(NPFP[P, x:i : P(x) ; P(x)](y))").unwrap();
        assert!(typecheck(&g, &v).is_ok());
    }

    #[test]
    fn unbound_variable_reported() {
        let f = parse_formula("P(x)").unwrap();
        let errs = typecheck(&f, &Vocabulary::empty()).unwrap_err();
        assert_eq!(errs.len(), 2); // both P and x
    }

    #[test]
    fn annotation_is_idempotent() {
        let v = vocab(&[("E", "(i,i)")]);
        let f = parse_formula("forall x:i. exists y:i. E(x,y) & !(x = y)").unwrap();
        let first = typecheck(&f, &v).unwrap();
        let second = typecheck(&f, &v).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn equality_needs_shared_type() {
        let v = vocab(&[("X", "(i)"), ("y", "i")]);
        let f = parse_formula("X = y").unwrap();
        assert!(typecheck(&f, &v).is_err());
        let g = parse_formula("X =:((i)) X").unwrap();
        assert!(typecheck(&g, &v).is_err()); // ascription disagrees with (i)
        let h = parse_formula("X =:(i) X").unwrap();
        assert!(typecheck(&h, &v).is_ok());
    }

    #[test]
    fn operator_tuple_shapes_enforced() {
        let v = vocab(&[("E", "(i,i)"), ("z", "i"), ("t", "i")]);
        let f = parse_formula("TC[x; Y:(i) : E(x,x)](z; t)").unwrap();
        let errs = typecheck(&f, &v).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, TypeError::OperatorShape { .. })));
    }

    #[test]
    fn fixpoint_predicate_has_tuple_type() {
        let v = vocab(&[("y", "i")]);
        // P gets type (i); applying it to one element is fine.
        let f = parse_formula("PFP[P, x:i : P(x)](y)").unwrap();
        assert!(typecheck(&f, &v).is_ok());
        // Applying P at the wrong arity is not.
        let g = parse_formula("PFP[P, x:i : P(x,x)](y)").unwrap();
        assert!(typecheck(&g, &v).is_err());
    }
}
