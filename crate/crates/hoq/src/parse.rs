//! Concrete syntax for formulas and types.
//!
//! Grammar sketch (ASCII):
//!
//! ```text
//! type     := "i" | "(" type ("," type)* ")"
//! formula  := iff
//! iff      := imp ("<->" imp)*                  # desugars to & of two ->
//! imp      := or ("->" imp)?                    # desugars to !a | b
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "!" unary | quantifier | primary
//! quantifier := ("exists" | "forall") NAME ":" type "." formula
//! primary  := "(" formula ")" | operator | sugar | atom
//! atom     := NAME "(" term ("," term)* ")"
//!           | term "=" [":" type] term
//!           | term "<" term | term ">" term
//! term     := NAME | "bot" ":" type | "top" ":" type
//! operator := "TC" "[" binders ";" binders ":" formula "]"
//!                  "(" terms ";" terms ")"
//!           | ("PFP"|"IFP") "[" NAME "," binders ":" formula "]" "(" terms ")"
//!           | ("NPFP"|"NIFP"|"APFP"|"AIFP")
//!                  "[" NAME "," binders ":" formula ";" formula "]" "(" terms ")"
//! sugar    := "card" ("<="|">="|"=") NUMBER "(" term ")"
//!           | ("0"|"1"|"max") "(" term ")"
//!           | "if" formula "then" formula "else" formula
//! ```
//!
//! `->` and `<->` are surface sugar and never appear in the AST. A binder
//! inside `TC[...]` may omit its type, which defaults to `i`. Comments run
//! from `#` to end of line. Quantifier bodies extend maximally to the
//! right.

use crate::error::{ParseError, SourceSpan};
use crate::formula::{AFixKind, Binder, FixKind, Formula, NFixKind, QuantKind, Term};
use crate::gen::{self, CardOp, ConstKind};
use crate::types::TypeExpr;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Number(u64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    Eq,
    Lt,
    Gt,
    Le,
    Ge,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn span_here(&self, start: usize, start_line: usize, start_col: usize) -> SourceSpan {
        SourceSpan {
            start,
            end: self.pos,
            line: start_line,
            column: start_col,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.bytes.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn tokenize(mut self) -> Result<Vec<Token>, ParseError> {
        let mut out = Vec::new();
        while let Some(b) = self.peek() {
            let (start, line, col) = (self.pos, self.line, self.column);
            match b {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b'#' => {
                    while let Some(c) = self.peek() {
                        if c == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                b'(' | b')' | b'[' | b']' | b',' | b';' | b':' | b'.' | b'=' | b'!' | b'&'
                | b'|' => {
                    self.bump();
                    let tok = match b {
                        b'(' => Tok::LParen,
                        b')' => Tok::RParen,
                        b'[' => Tok::LBracket,
                        b']' => Tok::RBracket,
                        b',' => Tok::Comma,
                        b';' => Tok::Semi,
                        b':' => Tok::Colon,
                        b'.' => Tok::Dot,
                        b'=' => Tok::Eq,
                        b'!' => Tok::Bang,
                        b'&' => Tok::Amp,
                        _ => Tok::Pipe,
                    };
                    out.push(Token {
                        tok,
                        span: self.span_here(start, line, col),
                    });
                }
                b'<' => {
                    self.bump();
                    let tok = match self.peek() {
                        Some(b'=') => {
                            self.bump();
                            Tok::Le
                        }
                        Some(b'-') => {
                            self.bump();
                            if self.peek() == Some(b'>') {
                                self.bump();
                                Tok::DArrow
                            } else {
                                return Err(ParseError {
                                    span: self.span_here(start, line, col),
                                    message: "expected <-> after <-".into(),
                                });
                            }
                        }
                        _ => Tok::Lt,
                    };
                    out.push(Token {
                        tok,
                        span: self.span_here(start, line, col),
                    });
                }
                b'>' => {
                    self.bump();
                    let tok = if self.peek() == Some(b'=') {
                        self.bump();
                        Tok::Ge
                    } else {
                        Tok::Gt
                    };
                    out.push(Token {
                        tok,
                        span: self.span_here(start, line, col),
                    });
                }
                b'-' => {
                    self.bump();
                    if self.peek() == Some(b'>') {
                        self.bump();
                        out.push(Token {
                            tok: Tok::Arrow,
                            span: self.span_here(start, line, col),
                        });
                    } else {
                        return Err(ParseError {
                            span: self.span_here(start, line, col),
                            message: "expected -> after -".into(),
                        });
                    }
                }
                b'0'..=b'9' => {
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.bump();
                    }
                    let text = &self.src[start..self.pos];
                    let value = text.parse().map_err(|_| ParseError {
                        span: self.span_here(start, line, col),
                        message: format!("number {text} is too large"),
                    })?;
                    out.push(Token {
                        tok: Tok::Number(value),
                        span: self.span_here(start, line, col),
                    });
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    while matches!(
                        self.peek(),
                        Some(b'a'..=b'z' | b'A'..=b'Z' | b'0'..=b'9' | b'_' | b'\'')
                    ) {
                        self.bump();
                    }
                    let text = self.src[start..self.pos].to_string();
                    out.push(Token {
                        tok: Tok::Name(text),
                        span: self.span_here(start, line, col),
                    });
                }
                other => {
                    self.bump();
                    return Err(ParseError {
                        span: self.span_here(start, line, col),
                        message: format!("unexpected character {:?}", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: SourceSpan,
    // Enclosing binder types, innermost last; resolves card sugar.
    scope: Vec<(String, TypeExpr)>,
}

const KEYWORDS: &[&str] = &[
    "exists", "forall", "bot", "top", "card", "if", "then", "else", "max", "TC", "PFP", "IFP",
    "NPFP", "NIFP", "APFP", "AIFP",
];

impl Parser {
    fn new(tokens: Vec<Token>, src_len: usize) -> Self {
        let end = SourceSpan {
            start: src_len,
            end: src_len,
            line: 0,
            column: 0,
        };
        Parser {
            tokens,
            pos: 0,
            end,
            scope: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.tokens.get(self.pos + 1).map(|t| &t.tok)
    }

    fn span(&self) -> SourceSpan {
        self.tokens
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(self.end)
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens
            .get(self.pos.saturating_sub(1))
            .map(|t| t.span)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            span: self.span(),
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn eat(&mut self, tok: Tok) -> bool {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn name(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Name(n)) if !KEYWORDS.contains(&n.as_str()) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        match self.bump() {
            Some(Tok::Name(n)) if n == "i" => Ok(TypeExpr::Iota),
            Some(Tok::LParen) => {
                let mut children = vec![self.ty()?];
                while self.eat(Tok::Comma) {
                    children.push(self.ty()?);
                }
                self.expect(Tok::RParen, ") to close the type")?;
                Ok(TypeExpr::Tuple(children))
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                self.err("expected a type (i or (t,...,t))")
            }
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Name(n)) if n == "bot" || n == "top" => {
                let is_bot = n == "bot";
                self.pos += 1;
                self.expect(Tok::Colon, ": after bot/top")?;
                let ty = self.ty()?;
                Ok(if is_bot { Term::Bot(ty) } else { Term::Top(ty) })
            }
            _ => Ok(Term::Var(self.name("a variable")?)),
        }
    }

    fn term_list(&mut self, until: &Tok) -> Result<Vec<Term>, ParseError> {
        let mut out = vec![self.term()?];
        while self.eat(Tok::Comma) {
            out.push(self.term()?);
        }
        if self.peek() != Some(until) {
            return self.err("expected the end of the argument list");
        }
        Ok(out)
    }

    fn binder(&mut self) -> Result<Binder, ParseError> {
        let name = self.name("a bound variable")?;
        // A `:` here is ambiguous inside operator headers: it may start a
        // type ascription or the body. Commit to an ascription only when a
        // type parses and the list continues afterwards.
        if self.peek() == Some(&Tok::Colon) {
            let saved = self.pos;
            self.pos += 1;
            if let Ok(ty) = self.ty() {
                if matches!(
                    self.peek(),
                    Some(Tok::Comma | Tok::Semi | Tok::Colon | Tok::Dot)
                ) {
                    return Ok(Binder::new(name, ty));
                }
            }
            self.pos = saved;
        }
        Ok(Binder::new(name, TypeExpr::Iota))
    }

    fn binder_list(&mut self) -> Result<Vec<Binder>, ParseError> {
        let mut out = vec![self.binder()?];
        while self.eat(Tok::Comma) {
            out.push(self.binder()?);
        }
        Ok(out)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let first = self.implication()?;
        if self.peek() != Some(&Tok::DArrow) {
            return Ok(first);
        }
        let mut acc = first;
        while self.eat(Tok::DArrow) {
            let rhs = self.implication()?;
            acc = Formula::and(vec![acc.clone().implies(rhs.clone()), rhs.implies(acc)]);
        }
        Ok(acc)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(Tok::Arrow) {
            let rhs = self.implication()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut children = vec![self.conjunction()?];
        while self.eat(Tok::Pipe) {
            children.push(self.conjunction()?);
        }
        Ok(Formula::or(children))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut children = vec![self.unary()?];
        while self.eat(Tok::Amp) {
            children.push(self.unary()?);
        }
        Ok(Formula::and(children))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(Tok::Bang) {
            return Ok(self.unary()?.not());
        }
        match self.peek() {
            Some(Tok::Name(n)) if n == "exists" || n == "forall" => self.quantifier(),
            _ => self.primary(),
        }
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let kind = match self.bump() {
            Some(Tok::Name(n)) if n == "exists" => QuantKind::Exists,
            _ => QuantKind::Forall,
        };
        let var = self.name("a bound variable")?;
        self.expect(Tok::Colon, ": and a type after the bound variable")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, ". before the quantifier body")?;
        self.scope.push((var.clone(), ty.clone()));
        let body = self.formula();
        self.scope.pop();
        Ok(Formula::quant(kind, var, ty, body?))
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen, ") to close the formula")?;
                Ok(inner)
            }
            Some(Tok::Number(k)) if matches!(self.peek2(), Some(Tok::LParen)) => {
                let span = self.span();
                self.pos += 1;
                if k > 1 {
                    return Err(ParseError {
                        span,
                        message: format!("unknown predicate {k}; only 0(...) and 1(...) exist"),
                    });
                }
                self.expect(Tok::LParen, "(")?;
                let arg = self.term()?;
                self.expect(Tok::RParen, ")")?;
                let kind = if k == 0 {
                    ConstKind::Zero
                } else {
                    ConstKind::One
                };
                Ok(gen::gen_const(kind, &arg))
            }
            Some(Tok::Name(n)) if n == "max" && matches!(self.peek2(), Some(Tok::LParen)) => {
                self.pos += 2;
                let arg = self.term()?;
                self.expect(Tok::RParen, ")")?;
                Ok(gen::gen_const(ConstKind::Max, &arg))
            }
            Some(Tok::Name(n)) if n == "card" => self.card_sugar(),
            Some(Tok::Name(n)) if n == "if" => self.if_sugar(),
            Some(Tok::Name(n)) if n == "TC" => self.tc_operator(),
            Some(Tok::Name(n)) if n == "PFP" || n == "IFP" => self.fix_operator(&n),
            Some(Tok::Name(n)) if matches!(n.as_str(), "NPFP" | "NIFP" | "APFP" | "AIFP") => {
                self.branching_operator(&n)
            }
            Some(Tok::Name(_)) => self.atom(),
            _ => self.err("expected a formula"),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.term()?;
        match self.peek() {
            Some(Tok::LParen) if matches!(lhs, Term::Var(_)) => {
                let head = lhs.var_name().unwrap().to_string();
                self.pos += 1;
                let args = self.term_list(&Tok::RParen)?;
                self.expect(Tok::RParen, ") to close the application")?;
                Ok(Formula::Apply { head, args })
            }
            Some(Tok::Eq) => {
                self.pos += 1;
                let ascription = if self.eat(Tok::Colon) {
                    Some(self.ty()?)
                } else {
                    None
                };
                let rhs = self.term()?;
                Ok(Formula::Equal {
                    lhs,
                    rhs,
                    ascription,
                })
            }
            Some(Tok::Lt) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(Formula::apply("<", vec![lhs, rhs]))
            }
            Some(Tok::Gt) => {
                self.pos += 1;
                let rhs = self.term()?;
                Ok(Formula::apply("<", vec![rhs, lhs]))
            }
            _ => self.err("expected (, =, or < after the term"),
        }
    }

    fn card_sugar(&mut self) -> Result<Formula, ParseError> {
        let card_span = self.span();
        self.pos += 1;
        let op = match self.bump() {
            Some(Tok::Le) => CardOp::AtMost,
            Some(Tok::Ge) => CardOp::AtLeast,
            Some(Tok::Eq) => CardOp::Exactly,
            _ => return self.err("expected <=, >=, or = after card"),
        };
        let k = match self.bump() {
            Some(Tok::Number(k)) => k,
            _ => return self.err("expected a bound after the card comparison"),
        };
        self.expect(Tok::LParen, "( around the card subject")?;
        let subject = self.term()?;
        let ty = if self.eat(Tok::Colon) {
            self.ty()?
        } else {
            match &subject {
                Term::Bot(t) | Term::Top(t) => t.clone(),
                Term::Var(name) => self
                    .scope
                    .iter()
                    .rev()
                    .find(|(n, _)| n == name)
                    .map(|(_, t)| t.clone())
                    .ok_or(ParseError {
                        span: card_span,
                        message: format!(
                            "cannot infer the type of {name} for card; write card..({name}:(...))"
                        ),
                    })?,
            }
        };
        self.expect(Tok::RParen, ") to close card")?;
        if ty.is_iota() {
            return Err(ParseError {
                span: card_span,
                message: "card needs a relation subject, not an element".into(),
            });
        }
        Ok(gen::gen_card(op, k, &ty, &subject))
    }

    fn if_sugar(&mut self) -> Result<Formula, ParseError> {
        self.pos += 1;
        let cond = self.formula()?;
        match self.bump() {
            Some(Tok::Name(n)) if n == "then" => {}
            _ => return self.err("expected then"),
        }
        let then_branch = self.formula()?;
        match self.bump() {
            Some(Tok::Name(n)) if n == "else" => {}
            _ => return self.err("expected else"),
        }
        let else_branch = self.formula()?;
        Ok(Formula::or(vec![
            Formula::and(vec![cond.clone(), then_branch]),
            Formula::and(vec![cond.not(), else_branch]),
        ]))
    }

    fn with_binders<T>(&mut self, binders: &[Binder], f: impl FnOnce(&mut Self) -> T) -> T {
        let depth = self.scope.len();
        self.scope
            .extend(binders.iter().map(|b| (b.name.clone(), b.ty.clone())));
        let out = f(self);
        self.scope.truncate(depth);
        out
    }

    fn tc_operator(&mut self) -> Result<Formula, ParseError> {
        self.pos += 1;
        self.expect(Tok::LBracket, "[ after TC")?;
        let xs = self.binder_list()?;
        self.expect(Tok::Semi, "; between the TC variable tuples")?;
        let ys = self.binder_list()?;
        self.expect(Tok::Colon, ": before the TC body")?;
        let all: Vec<Binder> = xs.iter().chain(&ys).cloned().collect();
        let body = self.with_binders(&all, |p| p.formula())?;
        self.expect(Tok::RBracket, "] to close the TC body")?;
        self.expect(Tok::LParen, "( before the TC arguments")?;
        let from = self.term_list(&Tok::Semi)?;
        self.expect(Tok::Semi, "; between the TC argument tuples")?;
        let to = self.term_list(&Tok::RParen)?;
        self.expect(Tok::RParen, ") to close the TC arguments")?;
        if from.len() != xs.len() || to.len() != ys.len() || xs.len() != ys.len() {
            return Err(ParseError {
                span: self.prev_span(),
                message: "TC tuples must all have the same length".into(),
            });
        }
        Ok(Formula::Tc {
            xs,
            ys,
            body: Box::new(body),
            from,
            to,
        })
    }

    fn fix_operator(&mut self, name: &str) -> Result<Formula, ParseError> {
        let kind = if name == "PFP" {
            FixKind::Pfp
        } else {
            FixKind::Ifp
        };
        self.pos += 1;
        self.expect(Tok::LBracket, "[ after the operator")?;
        let pred = self.name("the fixed-point variable")?;
        self.expect(Tok::Comma, ", after the fixed-point variable")?;
        let xs = self.binder_list()?;
        self.expect(Tok::Colon, ": before the body")?;
        let pred_ty = TypeExpr::Tuple(xs.iter().map(|b| b.ty.clone()).collect());
        let mut all = vec![Binder::new(pred.clone(), pred_ty)];
        all.extend(xs.iter().cloned());
        let body = self.with_binders(&all, |p| p.formula())?;
        self.expect(Tok::RBracket, "] to close the body")?;
        self.expect(Tok::LParen, "( before the arguments")?;
        let args = self.term_list(&Tok::RParen)?;
        self.expect(Tok::RParen, ") to close the arguments")?;
        if args.len() != xs.len() {
            return Err(ParseError {
                span: self.prev_span(),
                message: "the argument tuple must match the bound tuple".into(),
            });
        }
        Ok(Formula::Fix {
            kind,
            pred,
            xs,
            body: Box::new(body),
            args,
        })
    }

    fn branching_operator(&mut self, name: &str) -> Result<Formula, ParseError> {
        self.pos += 1;
        self.expect(Tok::LBracket, "[ after the operator")?;
        let pred = self.name("the fixed-point variable")?;
        self.expect(Tok::Comma, ", after the fixed-point variable")?;
        let xs = self.binder_list()?;
        self.expect(Tok::Colon, ": before the bodies")?;
        let pred_ty = TypeExpr::Tuple(xs.iter().map(|b| b.ty.clone()).collect());
        let mut all = vec![Binder::new(pred.clone(), pred_ty)];
        all.extend(xs.iter().cloned());
        let body0 = self.with_binders(&all, |p| p.formula())?;
        self.expect(Tok::Semi, "; between the two bodies")?;
        let body1 = self.with_binders(&all, |p| p.formula())?;
        self.expect(Tok::RBracket, "] to close the bodies")?;
        self.expect(Tok::LParen, "( before the arguments")?;
        let args = self.term_list(&Tok::RParen)?;
        self.expect(Tok::RParen, ") to close the arguments")?;
        if args.len() != xs.len() {
            return Err(ParseError {
                span: self.prev_span(),
                message: "the argument tuple must match the bound tuple".into(),
            });
        }
        let body0 = Box::new(body0);
        let body1 = Box::new(body1);
        Ok(match name {
            "NPFP" => Formula::NFix {
                kind: NFixKind::Npfp,
                pred,
                xs,
                body0,
                body1,
                args,
            },
            "NIFP" => Formula::NFix {
                kind: NFixKind::Nifp,
                pred,
                xs,
                body0,
                body1,
                args,
            },
            "APFP" => Formula::AFix {
                kind: AFixKind::Apfp,
                pred,
                xs,
                body0,
                body1,
                args,
            },
            _ => Formula::AFix {
                kind: AFixKind::Aifp,
                pred,
                xs,
                body0,
                body1,
                args,
            },
        })
    }
}

/// Parses a formula from text.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser::new(tokens, text.len());
    let f = parser.formula()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input after the formula");
    }
    Ok(f)
}

/// Parses a type string such as `i`, `(i,i)`, or `((i))`.
pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser::new(tokens, text.len());
    let t = parser.ty()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("trailing input after the type");
    }
    Ok(t)
}

/// Reads a formula file: `#` comments and whitespace around one formula.
pub fn load_formula(path: &std::path::Path) -> Result<Formula, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError {
        span: SourceSpan {
            start: 0,
            end: 0,
            line: 0,
            column: 0,
        },
        message: format!("{}: {e}", path.display()),
    })?;
    parse_formula(&text)
}
