//! Truth evaluation over a finite structure.
//!
//! Quantifiers expand explicitly over the canonical enumeration of their
//! type, equality is set equality, and the seven operators follow their
//! stage semantics:
//!
//! * `TC` — forward closure of the step relation from the first argument
//!   tuple (the recursive definition unrolled to reachability),
//! * `PFP` — iterate stages from empty; a repeat within the relation-count
//!   bound is the fixed point, exceeding it proves a proper cycle and
//!   answers false,
//! * `IFP` — `PFP` of the body disjoined with the current stage,
//! * `NPFP`/`NIFP` — breadth-first search of the two-body stage graph from
//!   empty, answering membership in the union of reachable common fixed
//!   points,
//! * `APFP`/`AIFP` — the union/intersection labelled tree: children apply
//!   the bodies with the dual connective, a node whose label repeats on
//!   its root path is pruned, leaves are common fixed points, and the
//!   output folds bottom-up.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::EvalError;
use crate::formula::{AFixKind, Binder, FixKind, Formula, NFixKind, QuantKind, Term};
use crate::limits::Limits;
use crate::relation::{
    empty_relation, enumerate_tuples, enumerate_values, full_relation, guarded_value_count,
    RelationValue, Tuple,
};
use crate::structure::Structure;
use crate::types::TypeExpr;

/// Variable bindings layered over the structure's interpretations.
pub type Environment = HashMap<String, RelationValue>;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EvalStats {
    pub quantifier_expansions: u64,
    pub fixpoint_stages: u64,
    pub tree_nodes: u64,
}

pub struct Evaluator<'a> {
    structure: &'a Structure,
    limits: Limits,
    env: Environment,
    pub stats: EvalStats,
    value_cache: HashMap<TypeExpr, std::rc::Rc<Vec<RelationValue>>>,
    tuple_cache: HashMap<Vec<TypeExpr>, std::rc::Rc<Vec<Tuple>>>,
}

/// Evaluates a well-typed formula. Free symbols resolve through `env`
/// first, then the structure.
pub fn eval(
    structure: &Structure,
    env: &Environment,
    formula: &Formula,
    limits: &Limits,
) -> Result<(bool, EvalStats), EvalError> {
    let mut evaluator = Evaluator::new(structure, env.clone(), *limits);
    let truth = evaluator.eval(formula)?;
    Ok((truth, evaluator.stats))
}

/// Convenience wrapper returning only the truth value.
pub fn eval_closed(
    structure: &Structure,
    formula: &Formula,
    limits: &Limits,
) -> Result<bool, EvalError> {
    eval(structure, &Environment::new(), formula, limits).map(|(b, _)| b)
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a Structure, env: Environment, limits: Limits) -> Self {
        Evaluator {
            structure,
            limits,
            env,
            stats: EvalStats::default(),
            value_cache: HashMap::new(),
            tuple_cache: HashMap::new(),
        }
    }

    fn n(&self) -> u64 {
        self.structure.universe
    }

    fn values_of(&mut self, ty: &TypeExpr) -> Result<std::rc::Rc<Vec<RelationValue>>, EvalError> {
        if let Some(v) = self.value_cache.get(ty) {
            return Ok(v.clone());
        }
        let values = std::rc::Rc::new(enumerate_values(ty, self.n(), &self.limits)?);
        self.value_cache.insert(ty.clone(), values.clone());
        Ok(values)
    }

    fn tuples_of(&mut self, tys: &[TypeExpr]) -> Result<std::rc::Rc<Vec<Tuple>>, EvalError> {
        if let Some(v) = self.tuple_cache.get(tys) {
            return Ok(v.clone());
        }
        let tuples = std::rc::Rc::new(enumerate_tuples(tys, self.n(), &self.limits)?);
        self.tuple_cache.insert(tys.to_vec(), tuples.clone());
        Ok(tuples)
    }

    fn bind(&mut self, name: &str, value: RelationValue) -> Option<RelationValue> {
        self.env.insert(name.to_string(), value)
    }

    fn unbind(&mut self, name: &str, old: Option<RelationValue>) {
        match old {
            Some(v) => {
                self.env.insert(name.to_string(), v);
            }
            None => {
                self.env.remove(name);
            }
        }
    }

    fn term_value(&mut self, t: &Term) -> Result<RelationValue, EvalError> {
        match t {
            Term::Var(name) => self
                .env
                .get(name)
                .or_else(|| self.structure.get(name))
                .cloned()
                .ok_or_else(|| EvalError::UnboundSymbol(name.clone())),
            Term::Bot(ty) => Ok(empty_relation(ty)),
            Term::Top(ty) => full_relation(ty, self.n(), &self.limits),
        }
    }

    pub fn eval(&mut self, f: &Formula) -> Result<bool, EvalError> {
        match f {
            Formula::Apply { head, args } => {
                let head_value = self
                    .env
                    .get(head)
                    .or_else(|| self.structure.get(head))
                    .cloned()
                    .ok_or_else(|| EvalError::UnboundSymbol(head.clone()))?;
                let tuple = args
                    .iter()
                    .map(|a| self.term_value(a))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(head_value.contains(&tuple))
            }
            Formula::Equal { lhs, rhs, .. } => Ok(self.term_value(lhs)? == self.term_value(rhs)?),
            Formula::And(cs) => {
                for c in cs {
                    if !self.eval(c)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Formula::Or(cs) => {
                for c in cs {
                    if self.eval(c)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Formula::Not(c) => Ok(!self.eval(c)?),
            Formula::Quant {
                kind,
                var,
                ty,
                body,
            } => {
                let values = self.values_of(ty)?;
                for value in values.iter() {
                    self.stats.quantifier_expansions += 1;
                    let old = self.bind(var, value.clone());
                    let truth = self.eval(body);
                    self.unbind(var, old);
                    match (kind, truth?) {
                        (QuantKind::Exists, true) => return Ok(true),
                        (QuantKind::Forall, false) => return Ok(false),
                        _ => {}
                    }
                }
                Ok(*kind == QuantKind::Forall)
            }
            Formula::Tc {
                xs,
                ys,
                body,
                from,
                to,
            } => self.eval_tc(xs, ys, body, from, to),
            Formula::Fix {
                kind,
                pred,
                xs,
                body,
                args,
            } => {
                let wrapped;
                let body = match kind {
                    FixKind::Pfp => body.as_ref(),
                    FixKind::Ifp => {
                        wrapped = inflationary(pred, xs, body);
                        &wrapped
                    }
                };
                self.eval_pfp(pred, xs, body, args)
            }
            Formula::NFix {
                kind,
                pred,
                xs,
                body0,
                body1,
                args,
            } => {
                let (w0, w1);
                let (body0, body1) = match kind {
                    NFixKind::Npfp => (body0.as_ref(), body1.as_ref()),
                    NFixKind::Nifp => {
                        w0 = inflationary(pred, xs, body0);
                        w1 = inflationary(pred, xs, body1);
                        (&w0, &w1)
                    }
                };
                self.eval_npfp(pred, xs, body0, body1, args)
            }
            Formula::AFix {
                kind,
                pred,
                xs,
                body0,
                body1,
                args,
            } => {
                let (w0, w1);
                let (body0, body1) = match kind {
                    AFixKind::Apfp => (body0.as_ref(), body1.as_ref()),
                    AFixKind::Aifp => {
                        w0 = inflationary(pred, xs, body0);
                        w1 = inflationary(pred, xs, body1);
                        (&w0, &w1)
                    }
                };
                let output = self.apfp_output(pred, xs, body0, body1)?;
                let target = self.args_tuple(args)?;
                Ok(output.contains(&target))
            }
        }
    }

    fn args_tuple(&mut self, args: &[Term]) -> Result<Tuple, EvalError> {
        args.iter().map(|t| self.term_value(t)).collect()
    }

    fn binder_types(xs: &[Binder]) -> Vec<TypeExpr> {
        xs.iter().map(|b| b.ty.clone()).collect()
    }

    fn eval_tc(
        &mut self,
        xs: &[Binder],
        ys: &[Binder],
        body: &Formula,
        from: &[Term],
        to: &[Term],
    ) -> Result<bool, EvalError> {
        let start = self.args_tuple(from)?;
        let target = self.args_tuple(to)?;
        if start == target {
            return Ok(true);
        }
        let tys = Self::binder_types(xs);
        let space = self.tuples_of(&tys)?;
        let mut reached: BTreeSet<Tuple> = BTreeSet::new();
        reached.insert(start.clone());
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for b in space.iter() {
                    if reached.contains(b) {
                        continue;
                    }
                    if self.step_holds(xs, ys, body, a, b)? {
                        if *b == target {
                            return Ok(true);
                        }
                        reached.insert(b.clone());
                        next.push(b.clone());
                    }
                }
            }
            frontier = next;
        }
        Ok(false)
    }

    fn step_holds(
        &mut self,
        xs: &[Binder],
        ys: &[Binder],
        body: &Formula,
        a: &[RelationValue],
        b: &[RelationValue],
    ) -> Result<bool, EvalError> {
        let mut saved = Vec::with_capacity(xs.len() + ys.len());
        for (binder, value) in xs.iter().zip(a).chain(ys.iter().zip(b)) {
            saved.push((binder.name.clone(), self.bind(&binder.name, value.clone())));
        }
        let truth = self.eval(body);
        for (name, old) in saved.into_iter().rev() {
            self.unbind(&name, old);
        }
        truth
    }

    /// One application of a fixed-point body: the set of tuples where the
    /// body holds with the predicate bound to `current`.
    fn next_stage(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body: &Formula,
        current: &RelationValue,
    ) -> Result<RelationValue, EvalError> {
        let tys = Self::binder_types(xs);
        let stage_ty = TypeExpr::Tuple(tys.clone());
        let space = self.tuples_of(&tys)?;
        let old_pred = self.bind(pred, current.clone());
        let mut members = Vec::new();
        let mut result = Ok(());
        'outer: for tuple in space.iter() {
            let mut saved = Vec::with_capacity(xs.len());
            for (binder, value) in xs.iter().zip(tuple) {
                saved.push((binder.name.clone(), self.bind(&binder.name, value.clone())));
            }
            let truth = self.eval(body);
            for (name, old) in saved.into_iter().rev() {
                self.unbind(&name, old);
            }
            match truth {
                Ok(true) => members.push(tuple.clone()),
                Ok(false) => {}
                Err(e) => {
                    result = Err(e);
                    break 'outer;
                }
            }
        }
        self.unbind(pred, old_pred);
        result?;
        self.stats.fixpoint_stages += 1;
        Ok(RelationValue::set(stage_ty, members))
    }

    /// One body application on an explicit stage; the primitive shared by
    /// the operator semantics and the strategy oracle.
    pub fn stage_application(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body: &Formula,
        current: &RelationValue,
    ) -> Result<RelationValue, EvalError> {
        self.next_stage(pred, xs, body, current)
    }

    /// The deterministic stage sequence from empty, ending either at the
    /// first repeated stage (a fixed point) or after the relation-count
    /// bound without one (a proper cycle).
    pub fn fixpoint_stages(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body: &Formula,
    ) -> Result<(Vec<RelationValue>, Option<RelationValue>), EvalError> {
        let stage_ty = TypeExpr::Tuple(Self::binder_types(xs));
        let bound = guarded_value_count(&stage_ty, self.n(), &self.limits)?;
        let mut stages = vec![RelationValue::empty(stage_ty)];
        for _ in 0..bound {
            let next = self.next_stage(pred, xs, body, stages.last().unwrap())?;
            if &next == stages.last().unwrap() {
                let fixed = next;
                return Ok((stages, Some(fixed)));
            }
            stages.push(next);
        }
        Ok((stages, None))
    }

    fn eval_pfp(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body: &Formula,
        args: &[Term],
    ) -> Result<bool, EvalError> {
        let (_, fixed) = self.fixpoint_stages(pred, xs, body)?;
        match fixed {
            Some(fixed) => {
                let target = self.args_tuple(args)?;
                Ok(fixed.contains(&target))
            }
            // The deterministic sequence exceeded the number of distinct
            // relations without repeating a stage, so it sits on a cycle
            // of length at least two.
            None => Ok(false),
        }
    }

    fn eval_npfp(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body0: &Formula,
        body1: &Formula,
        args: &[Term],
    ) -> Result<bool, EvalError> {
        let target = self.args_tuple(args)?;
        let stage_ty = TypeExpr::Tuple(Self::binder_types(xs));
        let bound = guarded_value_count(&stage_ty, self.n(), &self.limits)?;
        let bottom = RelationValue::empty(stage_ty);
        let mut visited: BTreeSet<RelationValue> = BTreeSet::new();
        visited.insert(bottom.clone());
        let mut queue = VecDeque::from([bottom]);
        let mut answer = false;
        while let Some(p) = queue.pop_front() {
            let q0 = self.next_stage(pred, xs, body0, &p)?;
            let q1 = self.next_stage(pred, xs, body1, &p)?;
            if q0 == p && q1 == p && p.contains(&target) {
                answer = true;
            }
            for q in [q0, q1] {
                if visited.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
            debug_assert!(visited.len() as u64 <= bound);
        }
        Ok(answer)
    }

    /// Size of the visited set explored by `NPFP` over these bodies; test
    /// support for the visited-set bound.
    pub fn npfp_visited(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body0: &Formula,
        body1: &Formula,
    ) -> Result<usize, EvalError> {
        let stage_ty = TypeExpr::Tuple(Self::binder_types(xs));
        guarded_value_count(&stage_ty, self.n(), &self.limits)?;
        let bottom = RelationValue::empty(stage_ty);
        let mut visited: BTreeSet<RelationValue> = BTreeSet::new();
        visited.insert(bottom.clone());
        let mut queue = VecDeque::from([bottom]);
        while let Some(p) = queue.pop_front() {
            for body in [body0, body1] {
                let q = self.next_stage(pred, xs, body, &p)?;
                if visited.insert(q.clone()) {
                    queue.push_back(q);
                }
            }
        }
        Ok(visited.len())
    }

    /// Output relation of the alternating tree rooted at the empty stage.
    pub fn apfp_output(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body0: &Formula,
        body1: &Formula,
    ) -> Result<RelationValue, EvalError> {
        let stage_ty = TypeExpr::Tuple(Self::binder_types(xs));
        guarded_value_count(&stage_ty, self.n(), &self.limits)?;
        let bottom = RelationValue::empty(stage_ty.clone());
        let mut path = Vec::new();
        self.tree_output(
            pred,
            xs,
            body0,
            body1,
            Conn::Union,
            bottom,
            &stage_ty,
            &mut path,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn tree_output(
        &mut self,
        pred: &str,
        xs: &[Binder],
        body0: &Formula,
        body1: &Formula,
        conn: Conn,
        label: RelationValue,
        stage_ty: &TypeExpr,
        path: &mut Vec<(Conn, RelationValue)>,
    ) -> Result<RelationValue, EvalError> {
        self.stats.tree_nodes += 1;
        let q0 = self.next_stage(pred, xs, body0, &label)?;
        let q1 = self.next_stage(pred, xs, body1, &label)?;
        if q0 == label && q1 == label {
            return Ok(label);
        }
        let mut child_labels = vec![q0];
        if q1 != child_labels[0] {
            child_labels.push(q1);
        }
        let dual = conn.dual();
        // A child whose label already occurs on the root path is the
        // second occurrence of that label in this branch: the branch
        // repeats forever, produces no leaves, and so constrains nothing.
        // It stands for the full relation, which absorbs a union parent
        // and drops out of an intersection parent.
        let mut kept = Vec::with_capacity(child_labels.len());
        for q in child_labels {
            if path.iter().any(|(c, p)| *c == dual && p == &q) {
                match conn {
                    Conn::Union => return full_relation(stage_ty, self.n(), &self.limits),
                    Conn::Inter => continue,
                }
            }
            kept.push(q);
        }
        if kept.is_empty() {
            return full_relation(stage_ty, self.n(), &self.limits);
        }
        path.push((conn, label));
        let mut outputs = Vec::with_capacity(kept.len());
        for q in kept {
            let out = self.tree_output(pred, xs, body0, body1, dual, q, stage_ty, path);
            match out {
                Ok(o) => outputs.push(o),
                Err(e) => {
                    path.pop();
                    return Err(e);
                }
            }
        }
        path.pop();
        let mut acc = outputs.remove(0);
        for o in outputs {
            acc = match conn {
                Conn::Union => union(acc, &o),
                Conn::Inter => intersect(acc, &o),
            };
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conn {
    Union,
    Inter,
}

impl Conn {
    fn dual(self) -> Conn {
        match self {
            Conn::Union => Conn::Inter,
            Conn::Inter => Conn::Union,
        }
    }
}

fn union(a: RelationValue, b: &RelationValue) -> RelationValue {
    let ty = a.ty();
    let mut tuples = a.tuples().to_vec();
    tuples.extend(b.tuples().iter().cloned());
    RelationValue::set(ty, tuples)
}

fn intersect(a: RelationValue, b: &RelationValue) -> RelationValue {
    let ty = a.ty();
    let tuples = a
        .tuples()
        .iter()
        .filter(|t| b.contains(t))
        .cloned()
        .collect();
    RelationValue::set(ty, tuples)
}

/// The inflationary wrapping `P(xs) or body`.
pub fn inflationary(pred: &str, xs: &[Binder], body: &Formula) -> Formula {
    let args = xs.iter().map(|b| Term::var(b.name.clone())).collect();
    Formula::or(vec![Formula::apply(pred, args), body.clone()])
}

/// Number of tuples of the binder types; the stage-count bound for
/// inflationary iteration.
pub fn tuple_space_size(
    xs: &[Binder],
    structure: &Structure,
    limits: &Limits,
) -> Result<u64, EvalError> {
    let tys: Vec<_> = xs.iter().map(|b| b.ty.clone()).collect();
    let count = crate::relation::tuple_count(&tys, structure.universe, limits)?;
    count.to_u64().ok_or(EvalError::CountOverflow {
        limit: limits.max_code_bits,
    })
}
