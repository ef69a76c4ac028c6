//! Depth-first search for a satisfying assignment.
//!
//! Literals are assigned in order of first occurrence, each over the
//! universe in its given order, so the first leaf reached is the
//! lexicographically least satisfying assignment. The top-level
//! conjunction is split into conjuncts; by positivity the formula is
//! nonzero iff every conjunct is. After each assignment the affected
//! conjuncts are evaluated three-valuedly and the branch is cut as soon as
//! one is known to be zero.

use std::collections::HashMap;

use super::{SatOutcome, SearchBudget};
use crate::error::{Error, Result};
use crate::eval::eval_pl;
use crate::logic::{Literal, PLAssignment, PLFormula};
use crate::semiring::{compare, Relation, SemiringId, SemiringProfile, Value};

#[derive(Debug, Clone, Copy)]
enum Op {
    And,
    Or,
    Eq,
    Leq,
    Neq,
    NotLeq,
    BAnd,
    BOr,
    BImp,
}

#[derive(Debug, Clone)]
enum Node {
    Lit(usize),
    Const(Value),
    Bin(Op, usize, usize),
    BNot(usize),
}

/// Abstract value of a subformula under a partial assignment.
#[derive(Debug, Clone)]
enum Abs {
    Known(Value),
    NonZero,
    Unknown,
}

impl Abs {
    /// `Some(true)` if certainly nonzero, `Some(false)` if certainly zero.
    fn truth(&self) -> Option<bool> {
        match self {
            Abs::Known(v) => Some(!v.is_zero()),
            Abs::NonZero => Some(true),
            Abs::Unknown => None,
        }
    }
}

struct Compiled {
    nodes: Vec<Node>,
    conjuncts: Vec<usize>,
    literals: Vec<Literal>,
}

struct Lowering {
    nodes: Vec<Node>,
    index: HashMap<Literal, usize>,
    literals: Vec<Literal>,
}

impl Lowering {
    fn lit(&mut self, l: Literal) -> usize {
        let next = self.literals.len();
        let i = *self.index.entry(l.clone()).or_insert(next);
        if i == next {
            self.literals.push(l);
        }
        self.nodes.push(Node::Lit(i));
        self.nodes.len() - 1
    }

    fn lower(&mut self, f: &PLFormula) -> usize {
        use PLFormula as P;
        let node = match f {
            P::Prop(p) => return self.lit(Literal::pos(p)),
            P::NegProp(p) => return self.lit(Literal::neg(p)),
            P::Const(c) => Node::Const(c.clone()),
            P::BNot(a) => Node::BNot(self.lower(a)),
            P::And(a, b) => self.bin(Op::And, a, b),
            P::Or(a, b) => self.bin(Op::Or, a, b),
            P::Eq(a, b) => self.bin(Op::Eq, a, b),
            P::Leq(a, b) => self.bin(Op::Leq, a, b),
            P::Neq(a, b) => self.bin(Op::Neq, a, b),
            P::NotLeq(a, b) => self.bin(Op::NotLeq, a, b),
            P::BAnd(a, b) => self.bin(Op::BAnd, a, b),
            P::BOr(a, b) => self.bin(Op::BOr, a, b),
            P::BImp(a, b) => self.bin(Op::BImp, a, b),
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn bin(&mut self, op: Op, a: &PLFormula, b: &PLFormula) -> Node {
        let a = self.lower(a);
        let b = self.lower(b);
        Node::Bin(op, a, b)
    }
}

fn split<'a>(f: &'a PLFormula, out: &mut Vec<&'a PLFormula>) {
    match f {
        PLFormula::And(a, b) | PLFormula::BAnd(a, b) => {
            split(a, out);
            split(b, out);
        }
        _ => out.push(f),
    }
}

fn compile(f: &PLFormula) -> Compiled {
    let mut parts = Vec::new();
    split(f, &mut parts);
    let mut low = Lowering {
        nodes: Vec::new(),
        index: HashMap::new(),
        literals: Vec::new(),
    };
    let conjuncts = parts.into_iter().map(|p| low.lower(p)).collect();
    Compiled {
        nodes: low.nodes,
        conjuncts,
        literals: low.literals,
    }
}

struct Search<'a> {
    c: &'a Compiled,
    id: SemiringId,
    profile: SemiringProfile,
    universe: &'a [Value],
    /// Conjuncts mentioning each literal.
    watch: Vec<Vec<usize>>,
    values: Vec<Option<Value>>,
    visited: u128,
    cap: u128,
}

impl Search<'_> {
    fn rel(&self, rel: Relation, a: &Value, b: &Value) -> Result<bool> {
        Ok(compare(&self.profile, rel, a, b)?.holds())
    }

    fn abs(&self, i: usize) -> Result<Abs> {
        let id = self.id;
        let flag = |b: bool| Abs::Known(id.bool(b));
        Ok(match &self.c.nodes[i] {
            Node::Lit(l) => match &self.values[*l] {
                Some(v) => Abs::Known(v.clone()),
                None => Abs::Unknown,
            },
            Node::Const(v) => Abs::Known(v.clone()),
            Node::BNot(a) => match self.abs(*a)?.truth() {
                Some(t) => flag(!t),
                None => Abs::Unknown,
            },
            Node::Bin(op, a, b) => {
                let (a, b) = (self.abs(*a)?, self.abs(*b)?);
                match op {
                    Op::And => match (&a, &b) {
                        (Abs::Known(x), Abs::Known(y)) => Abs::Known(x.mul(y)?),
                        _ => match (a.truth(), b.truth()) {
                            (Some(false), _) | (_, Some(false)) => Abs::Known(id.zero()),
                            (Some(true), Some(true)) => Abs::NonZero,
                            _ => Abs::Unknown,
                        },
                    },
                    Op::Or => match (&a, &b) {
                        (Abs::Known(x), Abs::Known(y)) => Abs::Known(x.add(y)?),
                        _ if a.truth() == Some(true) || b.truth() == Some(true) => Abs::NonZero,
                        _ => Abs::Unknown,
                    },
                    Op::Eq | Op::Neq => {
                        let eq = match (&a, &b) {
                            (Abs::Known(x), Abs::Known(y)) => Some(self.rel(Relation::Eq, x, y)?),
                            _ => match (a.truth(), b.truth()) {
                                (Some(x), Some(y)) if x != y => Some(false),
                                _ => None,
                            },
                        };
                        match eq {
                            Some(e) => flag(e == matches!(op, Op::Eq)),
                            None => Abs::Unknown,
                        }
                    }
                    Op::Leq | Op::NotLeq => match (&a, &b) {
                        (Abs::Known(x), Abs::Known(y)) => {
                            let h = self.rel(Relation::Leq, x, y)?;
                            flag(h == matches!(op, Op::Leq))
                        }
                        _ => Abs::Unknown,
                    },
                    Op::BAnd => match (a.truth(), b.truth()) {
                        (Some(false), _) | (_, Some(false)) => flag(false),
                        (Some(true), Some(true)) => flag(true),
                        _ => Abs::Unknown,
                    },
                    Op::BOr => match (a.truth(), b.truth()) {
                        (Some(true), _) | (_, Some(true)) => flag(true),
                        (Some(false), Some(false)) => flag(false),
                        _ => Abs::Unknown,
                    },
                    Op::BImp => match (a.truth(), b.truth()) {
                        (Some(false), _) | (_, Some(true)) => flag(true),
                        (Some(true), Some(false)) => flag(false),
                        _ => Abs::Unknown,
                    },
                }
            }
        })
    }

    fn consistent(&self, lit: usize) -> Result<bool> {
        for &k in &self.watch[lit] {
            if self.abs(self.c.conjuncts[k])?.truth() == Some(false) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn dfs(&mut self, depth: usize) -> Result<bool> {
        if depth == self.c.literals.len() {
            return Ok(true);
        }
        for v in self.universe {
            self.visited += 1;
            if self.visited > self.cap {
                return Err(Error::BoundExceeded {
                    needed: self.visited,
                    cap: self.cap,
                });
            }
            self.values[depth] = Some(v.clone());
            if self.consistent(depth)? && self.dfs(depth + 1)? {
                return Ok(true);
            }
        }
        self.values[depth] = None;
        Ok(false)
    }
}

/// First satisfying assignment of `f` in enumeration order, if any.
pub fn sat_bruteforce(f: &PLFormula, budget: &SearchBudget) -> Result<SatOutcome> {
    let id = budget.semiring()?;
    let c = compile(f);
    let mut watch = vec![Vec::new(); c.literals.len()];
    for (k, &root) in c.conjuncts.iter().enumerate() {
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            match &c.nodes[i] {
                Node::Lit(l) => {
                    if watch[*l].last() != Some(&k) {
                        watch[*l].push(k);
                    }
                }
                Node::Const(_) => {}
                Node::BNot(a) => stack.push(*a),
                Node::Bin(_, a, b) => {
                    stack.push(*a);
                    stack.push(*b);
                }
            }
        }
    }
    let mut search = Search {
        c: &c,
        id,
        profile: SemiringProfile::of(id),
        universe: &budget.universe,
        watch,
        values: vec![None; c.literals.len()],
        visited: 0,
        cap: budget.max_candidates,
    };
    // Conjuncts without literals are decided up front.
    for &root in &c.conjuncts {
        if search.abs(root)?.truth() == Some(false) {
            return Ok(SatOutcome::NoneWithinBounds);
        }
    }
    if !search.dfs(0)? {
        return Ok(SatOutcome::NoneWithinBounds);
    }
    let mut s = PLAssignment::new(id);
    for (lit, v) in c.literals.iter().zip(search.values) {
        s.set(lit.clone(), v.expect("leaf assigns every literal"))?;
    }
    let value = eval_pl(f, &s)?;
    if value.is_zero() {
        return Err(Error::Contract(
            "search produced an assignment that does not satisfy the formula".into(),
        ));
    }
    Ok(SatOutcome::Satisfied(s))
}
