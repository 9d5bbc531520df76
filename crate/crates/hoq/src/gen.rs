//! Generators for the reusable predicate formulas: cardinality bounds,
//! order constants, and arithmetic over relation codes.
//!
//! The arithmetic generators are parameterized by an arity `a` and order
//! `r` and speak about relations of the uniform type `A(a, r)`. They treat
//! a relation as the binary number formed by its canonical code, with the
//! canonically larger position tuple more significant. All of them assume
//! a first-order total order symbol `<` in the vocabulary.

use std::collections::BTreeSet;

use crate::formula::{Binder, Formula, QuantKind, Term};
use crate::types::TypeExpr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CardOp {
    AtLeast,
    AtMost,
    Exactly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Zero,
    One,
    Max,
}

/// Deterministic fresh-name supply that avoids a set of reserved names.
struct Namer {
    used: BTreeSet<String>,
}

impl Namer {
    fn avoiding<'a>(names: impl IntoIterator<Item = &'a str>) -> Namer {
        Namer {
            used: names.into_iter().map(str::to_string).collect(),
        }
    }

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

fn term_name(t: &Term) -> Option<&str> {
    t.var_name()
}

fn quant_chain(kind: QuantKind, binders: Vec<Binder>, body: Formula) -> Formula {
    binders
        .into_iter()
        .rev()
        .fold(body, |acc, b| Formula::quant(kind, b.name, b.ty, acc))
}

fn tuple_eq(us: &[String], vs: &[String]) -> Formula {
    Formula::and(
        us.iter()
            .zip(vs)
            .map(|(u, v)| Formula::equal(Term::var(u.clone()), Term::var(v.clone())))
            .collect(),
    )
}

/// `card<=k`, `card>=k`, `card=k` applied to a subject relation of the
/// given tuple type. `card>=0` is a tautology; `card<=0` says the subject
/// is empty.
pub fn gen_card(op: CardOp, k: u64, ty: &TypeExpr, subject: &Term) -> Formula {
    match op {
        CardOp::Exactly => Formula::and(vec![
            gen_card(CardOp::AtLeast, k, ty, subject),
            gen_card(CardOp::AtMost, k, ty, subject),
        ]),
        CardOp::AtLeast => {
            if k == 0 {
                return Formula::truth();
            }
            let children = ty.children().to_vec();
            let mut namer = Namer::avoiding(term_name(subject));
            let rows: Vec<Vec<String>> = (0..k)
                .map(|i| {
                    (0..children.len())
                        .map(|j| namer.fresh(&format!("u{i}_{j}")))
                        .collect()
                })
                .collect();
            let mut parts: Vec<Formula> = rows.iter().map(|row| apply_row(subject, row)).collect();
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    parts.push(tuple_eq(&rows[i], &rows[j]).not());
                }
            }
            quant_chain(
                QuantKind::Exists,
                flatten_binders(&rows, &children),
                Formula::and(parts),
            )
        }
        CardOp::AtMost => {
            let children = ty.children().to_vec();
            let mut namer = Namer::avoiding(term_name(subject));
            let rows: Vec<Vec<String>> = (0..=k)
                .map(|i| {
                    (0..children.len())
                        .map(|j| namer.fresh(&format!("u{i}_{j}")))
                        .collect()
                })
                .collect();
            let all_in: Vec<Formula> = rows.iter().map(|row| apply_row(subject, row)).collect();
            let mut collide = Vec::new();
            for i in 0..rows.len() {
                for j in i + 1..rows.len() {
                    collide.push(tuple_eq(&rows[i], &rows[j]));
                }
            }
            let conclusion = if collide.is_empty() {
                Formula::falsity()
            } else {
                Formula::or(collide)
            };
            quant_chain(
                QuantKind::Forall,
                flatten_binders(&rows, &children),
                Formula::and(all_in).implies(conclusion),
            )
        }
    }
}

fn apply_row(subject: &Term, row: &[String]) -> Formula {
    let args = row.iter().map(|n| Term::var(n.clone())).collect();
    match subject {
        Term::Var(head) => Formula::apply(head.clone(), args),
        // Constant subjects: full contains everything, empty nothing.
        Term::Top(_) => Formula::truth(),
        Term::Bot(_) => Formula::falsity(),
    }
}

fn flatten_binders(rows: &[Vec<String>], children: &[TypeExpr]) -> Vec<Binder> {
    rows.iter()
        .flat_map(|row| {
            row.iter()
                .zip(children)
                .map(|(n, t)| Binder::new(n.clone(), t.clone()))
        })
        .collect()
}

/// The order constants on an ordered universe: `0(x)` has nothing below,
/// `max(x)` nothing above, `1(x)` exactly one element below.
pub fn gen_const(kind: ConstKind, x: &Term) -> Formula {
    let mut namer = Namer::avoiding(term_name(x));
    match kind {
        ConstKind::Zero => {
            let y = namer.fresh("y");
            Formula::exists(
                y.clone(),
                TypeExpr::Iota,
                Formula::apply("<", vec![Term::var(y), x.clone()]),
            )
            .not()
        }
        ConstKind::Max => {
            let y = namer.fresh("y");
            Formula::exists(
                y.clone(),
                TypeExpr::Iota,
                Formula::apply("<", vec![x.clone(), Term::var(y)]),
            )
            .not()
        }
        ConstKind::One => {
            let u = namer.fresh("u");
            let u0 = namer.fresh("u0");
            let u1 = namer.fresh("u1");
            let some_below = Formula::exists(
                u.clone(),
                TypeExpr::Iota,
                Formula::apply("<", vec![Term::var(u), x.clone()]),
            );
            let below = |n: &str| Formula::apply("<", vec![Term::var(n), x.clone()]);
            let at_most_one = Formula::forall(
                u0.clone(),
                TypeExpr::Iota,
                Formula::forall(
                    u1.clone(),
                    TypeExpr::Iota,
                    Formula::and(vec![below(&u0), below(&u1)])
                        .implies(Formula::equal(Term::var(u0.clone()), Term::var(u1.clone()))),
                ),
            );
            Formula::and(vec![some_below, at_most_one])
        }
    }
}

fn child_ty(a: usize, r: u32) -> TypeExpr {
    TypeExpr::uniform(a, r - 1)
}

fn iff(lhs: Formula, rhs: Formula) -> Formula {
    Formula::and(vec![lhs.clone().implies(rhs.clone()), rhs.implies(lhs)])
}

fn xor(lhs: Formula, rhs: Formula) -> Formula {
    Formula::or(vec![
        Formula::and(vec![lhs.clone(), rhs.clone().not()]),
        Formula::and(vec![lhs.not(), rhs]),
    ])
}

fn apply_tuple(head: &str, row: &[String]) -> Formula {
    Formula::apply(head, row.iter().map(|n| Term::var(n.clone())).collect())
}

fn fresh_row(namer: &mut Namer, base: &str, a: usize) -> Vec<String> {
    (0..a).map(|j| namer.fresh(&format!("{base}{j}"))).collect()
}

fn row_binders(row: &[String], ty: &TypeExpr) -> Vec<Binder> {
    row.iter()
        .map(|n| Binder::new(n.clone(), ty.clone()))
        .collect()
}

/// Set equality at order `r`, down to first-order `=` at `r = 1`.
pub fn gen_eq_for(a: usize, r: u32, x: &str, y: &str) -> Formula {
    if r == 1 {
        return Formula::equal(Term::var(x), Term::var(y));
    }
    let mut namer = Namer::avoiding([x, y]);
    let row = fresh_row(&mut namer, "p", a);
    quant_chain(
        QuantKind::Forall,
        row_binders(&row, &child_ty(a, r)),
        iff(apply_tuple(x, &row), apply_tuple(y, &row)),
    )
}

pub fn gen_eq(a: usize, r: u32) -> Formula {
    gen_eq_for(a, r, "X", "Y")
}

/// Numeric order on codes: `X < Y` iff at some position Y has a one and X
/// a zero while every higher position agrees. Bottoms out in the
/// first-order `<` of the vocabulary.
pub fn gen_lt_for(a: usize, r: u32, x: &str, y: &str) -> Formula {
    if r == 1 {
        return Formula::apply("<", vec![Term::var(x), Term::var(y)]);
    }
    let mut namer = Namer::avoiding([x, y]);
    let pos = fresh_row(&mut namer, "p", a);
    let above = fresh_row(&mut namer, "q", a);
    let cty = child_ty(a, r);
    let higher_agree = quant_chain(
        QuantKind::Forall,
        row_binders(&above, &cty),
        gen_lt_tuple_for(a, r - 1, &pos, &above)
            .implies(iff(apply_tuple(y, &above), apply_tuple(x, &above))),
    );
    quant_chain(
        QuantKind::Exists,
        row_binders(&pos, &cty),
        Formula::and(vec![
            apply_tuple(y, &pos),
            apply_tuple(x, &pos).not(),
            higher_agree,
        ]),
    )
}

pub fn gen_lt(a: usize, r: u32) -> Formula {
    gen_lt_for(a, r, "X", "Y")
}

/// Lexicographic order on tuples of relations, first component most
/// significant.
pub fn gen_lt_tuple_for(a: usize, r: u32, xs: &[String], ys: &[String]) -> Formula {
    let cases: Vec<Formula> = (0..xs.len())
        .map(|i| {
            let mut parts: Vec<Formula> =
                (0..i).map(|j| gen_eq_for(a, r, &xs[j], &ys[j])).collect();
            parts.push(gen_lt_for(a, r, &xs[i], &ys[i]));
            Formula::and(parts)
        })
        .collect();
    Formula::or(cases)
}

pub fn gen_lt_tuple(a: usize, r: u32) -> Formula {
    let xs: Vec<String> = (0..a).map(|i| format!("X{i}")).collect();
    let ys: Vec<String> = (0..a).map(|i| format!("Y{i}")).collect();
    gen_lt_tuple_for(a, r, &xs, &ys)
}

/// The bit predicate is membership itself: bit `S̄` of `R` is its
/// application.
pub fn gen_bit(a: usize, r: u32) -> Formula {
    let _ = r;
    let row: Vec<String> = (0..a).map(|i| format!("S{i}")).collect();
    apply_tuple("R", &row)
}

/// Carry into position `pos` while adding `x` and `y`: some lower position
/// generates and everything strictly between propagates.
fn carry_into(a: usize, r: u32, x: &str, y: &str, pos: &[String], namer: &mut Namer) -> Formula {
    let cty = child_ty(a, r);
    let origin = fresh_row(namer, "t", a);
    let between = fresh_row(namer, "w", a);
    let propagate = quant_chain(
        QuantKind::Forall,
        row_binders(&between, &cty),
        Formula::and(vec![
            gen_lt_tuple_for(a, r - 1, &origin, &between),
            gen_lt_tuple_for(a, r - 1, &between, pos),
        ])
        .implies(Formula::or(vec![
            apply_tuple(x, &between),
            apply_tuple(y, &between),
        ])),
    );
    quant_chain(
        QuantKind::Exists,
        row_binders(&origin, &cty),
        Formula::and(vec![
            gen_lt_tuple_for(a, r - 1, &origin, pos),
            apply_tuple(x, &origin),
            apply_tuple(y, &origin),
            propagate,
        ]),
    )
}

/// A carry that leaves the code entirely: generated at some position and
/// propagated through every higher one.
fn carry_out(a: usize, r: u32, x: &str, y: &str, namer: &mut Namer) -> Formula {
    let cty = child_ty(a, r);
    let origin = fresh_row(namer, "t", a);
    let between = fresh_row(namer, "w", a);
    let propagate = quant_chain(
        QuantKind::Forall,
        row_binders(&between, &cty),
        gen_lt_tuple_for(a, r - 1, &origin, &between).implies(Formula::or(vec![
            apply_tuple(x, &between),
            apply_tuple(y, &between),
        ])),
    );
    quant_chain(
        QuantKind::Exists,
        row_binders(&origin, &cty),
        Formula::and(vec![
            apply_tuple(x, &origin),
            apply_tuple(y, &origin),
            propagate,
        ]),
    )
}

/// Exact addition on code values: true iff `value(x) + value(y) =
/// value(z)` with no wraparound. The positionwise sum is paired with the
/// requirement that no carry leaves the top position.
pub fn gen_plus_for(a: usize, r: u32, x: &str, y: &str, z: &str) -> Formula {
    let mut namer = Namer::avoiding([x, y, z]);
    let pos = fresh_row(&mut namer, "p", a);
    let sum_bit = xor(
        apply_tuple(x, &pos),
        xor(
            apply_tuple(y, &pos),
            carry_into(a, r, x, y, &pos, &mut namer),
        ),
    );
    let positionwise = quant_chain(
        QuantKind::Forall,
        row_binders(&pos, &child_ty(a, r)),
        iff(apply_tuple(z, &pos), sum_bit),
    );
    Formula::and(vec![positionwise, carry_out(a, r, x, y, &mut namer).not()])
}

pub fn gen_plus(a: usize, r: u32) -> Formula {
    gen_plus_for(a, r, "X", "Y", "Z")
}

/// Overflow: no exact sum exists, i.e. `value(x) + value(y) >= 2^bits`.
pub fn gen_overflow_for(a: usize, r: u32, x: &str, y: &str) -> Formula {
    let mut namer = Namer::avoiding([x, y]);
    let z = namer.fresh("z");
    Formula::exists(
        z.clone(),
        TypeExpr::uniform(a, r),
        gen_plus_for(a, r, x, y, &z),
    )
    .not()
}

pub fn gen_overflow(a: usize, r: u32) -> Formula {
    gen_overflow_for(a, r, "X", "Y")
}

/// `w` holds exactly the all-bottom tuple, i.e. its code value is 1.
fn is_one(a: usize, r: u32, w: &str, namer: &mut Namer) -> Formula {
    let cty = child_ty(a, r);
    let bots: Vec<Term> = vec![
        match &cty {
            TypeExpr::Iota => Term::Bot(TypeExpr::Iota),
            t => Term::Bot(t.clone()),
        };
        a
    ];
    let row = fresh_row(namer, "m", a);
    let only_bottom = quant_chain(
        QuantKind::Forall,
        row_binders(&row, &cty),
        apply_tuple(w, &row).implies(Formula::and(
            row.iter()
                .zip(&bots)
                .map(|(v, b)| Formula::equal(Term::var(v.clone()), b.clone()))
                .collect(),
        )),
    );
    Formula::and(vec![Formula::apply(w, bots.clone()), only_bottom])
}

/// Addition modulo `2^bits`: either the exact sum, or the wrapped value
/// reached through the witness chain d = p-1-x, e = d+1, f = p-1-y,
/// g = e+f, z = p-1-g.
pub fn gen_plus_mod_for(a: usize, r: u32, x: &str, y: &str, z: &str) -> Formula {
    let ty = TypeExpr::uniform(a, r);
    let mut namer = Namer::avoiding([x, y, z]);
    let pm1 = namer.fresh("pm1");
    let one = namer.fresh("one");
    let (d, e, f, g) = (
        namer.fresh("d"),
        namer.fresh("e"),
        namer.fresh("f"),
        namer.fresh("g"),
    );
    let chain = Formula::exists(
        d.clone(),
        ty.clone(),
        Formula::and(vec![
            gen_plus_for(a, r, &d, x, &pm1),
            Formula::exists(
                e.clone(),
                ty.clone(),
                Formula::and(vec![
                    gen_plus_for(a, r, &d, &one, &e),
                    Formula::exists(
                        f.clone(),
                        ty.clone(),
                        Formula::and(vec![
                            gen_plus_for(a, r, &f, y, &pm1),
                            Formula::exists(
                                g.clone(),
                                ty.clone(),
                                Formula::and(vec![
                                    gen_plus_for(a, r, &e, &f, &g),
                                    gen_plus_for(a, r, z, &g, &pm1),
                                ]),
                            ),
                        ]),
                    ),
                ]),
            ),
        ]),
    );
    let one_def = is_one(a, r, &one, &mut namer);
    let wrapped = Formula::exists(
        pm1.clone(),
        ty.clone(),
        Formula::and(vec![
            Formula::equal(Term::var(pm1.clone()), Term::Top(ty.clone())),
            Formula::exists(one.clone(), ty, Formula::and(vec![one_def, chain])),
        ]),
    );
    Formula::or(vec![gen_plus_for(a, r, x, y, z), wrapped])
}

pub fn gen_plus_mod(a: usize, r: u32) -> Formula {
    gen_plus_mod_for(a, r, "X", "Y", "Z")
}

/// Addition of `a`-tuples of relations read as `a`-digit numbers in base
/// `2^bits`, first digit most significant. A carry reaches digit `i` when
/// some lower digit overflows and every digit strictly between sums to
/// exactly base-1.
pub fn gen_plus_tuple_for(
    a: usize,
    r: u32,
    xs: &[String],
    ys: &[String],
    zs: &[String],
) -> Formula {
    let ty = TypeExpr::uniform(a, r);
    let avoid: Vec<&str> = xs.iter().chain(ys).chain(zs).map(String::as_str).collect();
    let mut namer = Namer::avoiding(avoid);
    let pm1 = namer.fresh("pm1");
    let one = namer.fresh("one");

    let mut digits = Vec::with_capacity(a);
    for i in 0..a {
        let mut carry_cases = Vec::new();
        for j in i + 1..a {
            let mut case = vec![gen_overflow_for(a, r, &xs[j], &ys[j])];
            for k in i + 1..j {
                case.push(gen_plus_mod_for(a, r, &xs[k], &ys[k], &pm1));
            }
            carry_cases.push(Formula::and(case));
        }
        let plain = gen_plus_mod_for(a, r, &xs[i], &ys[i], &zs[i]);
        if carry_cases.is_empty() {
            digits.push(plain);
            continue;
        }
        let carry = Formula::or(carry_cases);
        let t = namer.fresh(&format!("t{i}"));
        let bumped = Formula::exists(
            t.clone(),
            ty.clone(),
            Formula::and(vec![
                gen_plus_mod_for(a, r, &xs[i], &ys[i], &t),
                gen_plus_mod_for(a, r, &t, &one, &zs[i]),
            ]),
        );
        digits.push(Formula::or(vec![
            Formula::and(vec![carry.clone(), bumped]),
            Formula::and(vec![carry.not(), plain]),
        ]));
    }

    let one_def = is_one(a, r, &one, &mut namer);
    Formula::exists(
        pm1.clone(),
        ty.clone(),
        Formula::and(vec![
            Formula::equal(Term::var(pm1.clone()), Term::Top(ty.clone())),
            Formula::exists(
                one.clone(),
                ty,
                Formula::and(vec![one_def, Formula::and(digits)]),
            ),
        ]),
    )
}

pub fn gen_plus_tuple(a: usize, r: u32) -> Formula {
    let names = |base: &str| (0..a).map(|i| format!("{base}{i}")).collect::<Vec<_>>();
    gen_plus_tuple_for(a, r, &names("X"), &names("Y"), &names("Z"))
}
