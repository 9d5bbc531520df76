//! Canonical pretty-printer. Connectives are fully parenthesized and
//! binder types are always written, so `parse(print(f))` rebuilds `f`
//! exactly.

use std::fmt::Write;

use crate::formula::{AFixKind, Binder, FixKind, Formula, NFixKind, QuantKind, Term};

pub fn print_term(t: &Term) -> String {
    match t {
        Term::Var(n) => n.clone(),
        Term::Bot(ty) => format!("bot:{ty}"),
        Term::Top(ty) => format!("top:{ty}"),
    }
}

fn print_terms(ts: &[Term]) -> String {
    ts.iter().map(print_term).collect::<Vec<_>>().join(", ")
}

fn print_binders(bs: &[Binder]) -> String {
    bs.iter()
        .map(|b| format!("{}:{}", b.name, b.ty))
        .collect::<Vec<_>>()
        .join(", ")
}

/// True for forms that read unambiguously after `!` without parentheses.
fn atomic_for_not(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Apply { .. }
            | Formula::Not(_)
            | Formula::Tc { .. }
            | Formula::Fix { .. }
            | Formula::NFix { .. }
            | Formula::AFix { .. }
    ) && !is_infix(f)
}

fn is_infix(f: &Formula) -> bool {
    matches!(f, Formula::Apply { head, args } if head == "<" && args.len() == 2)
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, &mut out);
    out
}

fn write_formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Apply { head, args } if head == "<" && args.len() == 2 => {
            let _ = write!(out, "{} < {}", print_term(&args[0]), print_term(&args[1]));
        }
        Formula::Apply { head, args } => {
            let _ = write!(out, "{head}({})", print_terms(args));
        }
        Formula::Equal {
            lhs,
            rhs,
            ascription,
        } => match ascription {
            Some(ty) => {
                let _ = write!(out, "{} =:{ty} {}", print_term(lhs), print_term(rhs));
            }
            None => {
                let _ = write!(out, "{} = {}", print_term(lhs), print_term(rhs));
            }
        },
        Formula::And(children) | Formula::Or(children) => {
            let sep = if matches!(f, Formula::And(_)) {
                " & "
            } else {
                " | "
            };
            out.push('(');
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                // A quantifier body would swallow the rest of the list.
                if matches!(c, Formula::Quant { .. }) {
                    out.push('(');
                    write_formula(c, out);
                    out.push(')');
                } else {
                    write_formula(c, out);
                }
            }
            out.push(')');
        }
        Formula::Not(child) => {
            out.push('!');
            if atomic_for_not(child) {
                write_formula(child, out);
            } else {
                out.push('(');
                write_formula(child, out);
                out.push(')');
            }
        }
        Formula::Quant {
            kind,
            var,
            ty,
            body,
        } => {
            let word = match kind {
                QuantKind::Exists => "exists",
                QuantKind::Forall => "forall",
            };
            let _ = write!(out, "{word} {var}:{ty}. ");
            write_formula(body, out);
        }
        Formula::Tc {
            xs,
            ys,
            body,
            from,
            to,
        } => {
            let _ = write!(out, "TC[{}; {} : ", print_binders(xs), print_binders(ys));
            write_formula(body, out);
            let _ = write!(out, "]({}; {})", print_terms(from), print_terms(to));
        }
        Formula::Fix {
            kind,
            pred,
            xs,
            body,
            args,
        } => {
            let word = match kind {
                FixKind::Pfp => "PFP",
                FixKind::Ifp => "IFP",
            };
            let _ = write!(out, "{word}[{pred}, {} : ", print_binders(xs));
            write_formula(body, out);
            let _ = write!(out, "]({})", print_terms(args));
        }
        Formula::NFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let word = match kind {
                NFixKind::Npfp => "NPFP",
                NFixKind::Nifp => "NIFP",
            };
            let _ = write!(out, "{word}[{pred}, {} : ", print_binders(xs));
            write_formula(body0, out);
            out.push_str(" ; ");
            write_formula(body1, out);
            let _ = write!(out, "]({})", print_terms(args));
        }
        Formula::AFix {
            kind,
            pred,
            xs,
            body0,
            body1,
            args,
        } => {
            let word = match kind {
                AFixKind::Apfp => "APFP",
                AFixKind::Aifp => "AIFP",
            };
            let _ = write!(out, "{word}[{pred}, {} : ", print_binders(xs));
            write_formula(body0, out);
            out.push_str(" ; ");
            write_formula(body1, out);
            let _ = write!(out, "]({})", print_terms(args));
        }
    }
}
