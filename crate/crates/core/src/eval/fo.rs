//! First-order evaluation over a compiled arena.
//!
//! Variables are mapped to slots and relations to table indices once, so the
//! quantifier loops only touch vectors. Quantifier nodes are memoised on the
//! values of their free variables, which keeps formulas with deeply nested
//! definable helpers (minimum, successor, …) polynomial in practice.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{FOAssignment, FOFormula, KInterpretation, RelTable};
use crate::semiring::{compare, Relation, SemiringId, SemiringProfile, Value};

#[derive(Debug, Clone)]
enum Node {
    VarEq(usize, usize),
    VarNeq(usize, usize),
    Const(Value),
    Atom { rel: usize, neg: bool, args: Vec<usize> },
    Bin(Op, usize, usize),
    BNot(usize),
    Exists(usize, usize),
    Forall(usize, usize),
}

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

/// A formula lowered to an arena, reusable across interpretations that share
/// the relation names it mentions.
#[derive(Debug, Clone)]
pub(crate) struct CompiledFo {
    nodes: Vec<Node>,
    root: usize,
    slots: Vec<String>,
    rels: Vec<(String, usize)>,
    /// Free-variable slots of each quantifier node, for memo keys.
    free: Vec<Vec<usize>>,
}

struct Builder {
    nodes: Vec<Node>,
    slots: Vec<String>,
    rels: Vec<(String, usize)>,
}

impl Builder {
    fn slot(&mut self, x: &str) -> usize {
        match self.slots.iter().position(|s| s == x) {
            Some(i) => i,
            None => {
                self.slots.push(x.to_string());
                self.slots.len() - 1
            }
        }
    }

    fn rel(&mut self, r: &str, arity: usize) -> usize {
        match self.rels.iter().position(|(s, _)| s == r) {
            Some(i) => i,
            None => {
                self.rels.push((r.to_string(), arity));
                self.rels.len() - 1
            }
        }
    }

    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn lower(&mut self, f: &FOFormula) -> usize {
        use FOFormula as F;
        let n = match f {
            F::VarEq(x, y) => Node::VarEq(self.slot(x), self.slot(y)),
            F::VarNeq(x, y) => Node::VarNeq(self.slot(x), self.slot(y)),
            F::Const(c) => Node::Const(c.clone()),
            F::Atom(r, xs) | F::NegAtom(r, xs) => Node::Atom {
                rel: self.rel(r, xs.len()),
                neg: matches!(f, F::NegAtom(..)),
                args: xs.iter().map(|x| self.slot(x)).collect(),
            },
            F::BNot(a) => Node::BNot(self.lower(a)),
            F::Exists(x, a) | F::Forall(x, a) => {
                let s = self.slot(x);
                let body = self.lower(a);
                if matches!(f, F::Exists(..)) {
                    Node::Exists(s, body)
                } else {
                    Node::Forall(s, body)
                }
            }
            F::And(a, b)
            | F::Or(a, b)
            | F::Eq(a, b)
            | F::Leq(a, b)
            | F::Neq(a, b)
            | F::NotLeq(a, b)
            | F::BAnd(a, b)
            | F::BOr(a, b)
            | F::BImp(a, b) => {
                let op = match f {
                    F::And(..) => Op::And,
                    F::Or(..) => Op::Or,
                    F::Eq(..) => Op::Eq,
                    F::Leq(..) => Op::Leq,
                    F::Neq(..) => Op::Neq,
                    F::NotLeq(..) => Op::NotLeq,
                    F::BAnd(..) => Op::BAnd,
                    F::BOr(..) => Op::BOr,
                    _ => Op::BImp,
                };
                let l = self.lower(a);
                let r = self.lower(b);
                Node::Bin(op, l, r)
            }
        };
        self.push(n)
    }
}

impl CompiledFo {
    pub(crate) fn new(f: &FOFormula) -> CompiledFo {
        let mut b = Builder {
            nodes: Vec::new(),
            slots: Vec::new(),
            rels: Vec::new(),
        };
        let root = b.lower(f);
        let mut c = CompiledFo {
            nodes: b.nodes,
            root,
            slots: b.slots,
            rels: b.rels,
            free: Vec::new(),
        };
        c.free = (0..c.nodes.len()).map(|i| c.free_slots(i)).collect();
        c
    }

    fn free_slots(&self, i: usize) -> Vec<usize> {
        let mut out = match &self.nodes[i] {
            Node::VarEq(a, b) | Node::VarNeq(a, b) => vec![*a, *b],
            Node::Const(_) => vec![],
            Node::Atom { args, .. } => args.clone(),
            Node::Bin(_, a, b) => {
                let mut v = self.free_slots(*a);
                v.extend(self.free_slots(*b));
                v
            }
            Node::BNot(a) => self.free_slots(*a),
            Node::Exists(s, a) | Node::Forall(s, a) => {
                let mut v = self.free_slots(*a);
                v.retain(|x| x != s);
                v
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub(crate) fn root_free_vars(&self) -> Vec<&str> {
        self.free[self.root]
            .iter()
            .map(|&s| self.slots[s].as_str())
            .collect()
    }

    /// Resolves the formula's relations against `pi`.
    fn tables<'a>(&self, pi: &'a KInterpretation) -> Result<Vec<&'a RelTable>> {
        self.rels
            .iter()
            .map(|(r, ar)| {
                let t = pi.relation(r).ok_or_else(|| Error::MissingFact(r.clone()))?;
                if t.arity != *ar {
                    return Err(Error::Validation(format!(
                        "arity mismatch: {r} has arity {}, used with {ar} arguments",
                        t.arity
                    )));
                }
                Ok(t)
            })
            .collect()
    }

    pub(crate) fn eval(&self, pi: &KInterpretation, s: &FOAssignment) -> Result<Value> {
        let tables = self.tables(pi)?;
        let mut env: Vec<Option<usize>> = self.slots.iter().map(|x| s.get(x)).collect();
        for &slot in &self.free[self.root] {
            if env[slot].is_none() {
                return Err(Error::UnassignedVariable(self.slots[slot].clone()));
            }
        }
        for v in self.nodes.iter().filter_map(|n| match n {
            Node::Const(c) => Some(c),
            _ => None,
        }) {
            if v.id() != pi.semiring {
                return Err(Error::SemiringMismatch {
                    left: pi.semiring,
                    right: v.id(),
                });
            }
        }
        let mut run = Run {
            c: self,
            tables,
            id: pi.semiring,
            profile: SemiringProfile::of(pi.semiring),
            domain: pi.domain,
            memo: HashMap::new(),
        };
        run.eval(self.root, &mut env)
    }
}

struct Run<'a> {
    c: &'a CompiledFo,
    tables: Vec<&'a RelTable>,
    id: SemiringId,
    profile: SemiringProfile,
    domain: usize,
    memo: HashMap<(usize, Vec<usize>), Value>,
}

impl Run<'_> {
    fn cmp(&self, rel: Relation, a: &Value, b: &Value) -> Result<bool> {
        Ok(compare(&self.profile, rel, a, b)?.holds())
    }

    fn eval(&mut self, i: usize, env: &mut Vec<Option<usize>>) -> Result<Value> {
        let c = self.c;
        let id = self.id;
        Ok(match &c.nodes[i] {
            Node::VarEq(a, b) => id.bool(env[*a] == env[*b]),
            Node::VarNeq(a, b) => id.bool(env[*a] != env[*b]),
            Node::Const(v) => v.clone(),
            Node::Atom { rel, neg, args } => {
                let idx = args
                    .iter()
                    .fold(0, |acc, &s| acc * self.domain + env[s].expect("bound"));
                let t = self.tables[*rel];
                if *neg {
                    t.neg[idx].clone()
                } else {
                    t.pos[idx].clone()
                }
            }
            Node::BNot(a) => id.bool(self.eval(*a, env)?.is_zero()),
            Node::Bin(op, a, b) => {
                let (a, b) = (*a, *b);
                match op {
                    Op::And => {
                        let l = self.eval(a, env)?;
                        if l.is_zero() {
                            l
                        } else {
                            l.mul(&self.eval(b, env)?)?
                        }
                    }
                    Op::Or => self.eval(a, env)?.add(&self.eval(b, env)?)?,
                    Op::Eq | Op::Neq | Op::Leq | Op::NotLeq => {
                        let l = self.eval(a, env)?;
                        let r = self.eval(b, env)?;
                        let h = match op {
                            Op::Eq => self.cmp(Relation::Eq, &l, &r)?,
                            Op::Neq => !self.cmp(Relation::Eq, &l, &r)?,
                            Op::Leq => self.cmp(Relation::Leq, &l, &r)?,
                            _ => !self.cmp(Relation::Leq, &l, &r)?,
                        };
                        id.bool(h)
                    }
                    Op::BAnd => {
                        let h = !self.eval(a, env)?.is_zero() && !self.eval(b, env)?.is_zero();
                        id.bool(h)
                    }
                    Op::BOr => {
                        let h = !self.eval(a, env)?.is_zero() || !self.eval(b, env)?.is_zero();
                        id.bool(h)
                    }
                    Op::BImp => {
                        let h = self.eval(a, env)?.is_zero() || !self.eval(b, env)?.is_zero();
                        id.bool(h)
                    }
                }
            }
            Node::Exists(s, body) | Node::Forall(s, body) => {
                let key: Vec<usize> = c.free[i].iter().map(|&v| env[v].unwrap()).collect();
                let key = (i, key);
                if let Some(v) = self.memo.get(&key) {
                    return Ok(v.clone());
                }
                let exists = matches!(c.nodes[i], Node::Exists(..));
                let saved = env[*s];
                let mut acc = if exists { id.zero() } else { id.one() };
                for a in 0..self.domain {
                    env[*s] = Some(a);
                    let v = self.eval(*body, env)?;
                    if exists {
                        acc = acc.add(&v)?;
                    } else {
                        acc = acc.mul(&v)?;
                        if acc.is_zero() {
                            break;
                        }
                    }
                }
                env[*s] = saved;
                self.memo.insert(key, acc.clone());
                acc
            }
        })
    }
}
