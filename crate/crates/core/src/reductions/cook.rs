//! Machine runs of bounded length as propositional formulas.
//!
//! `v{t}_{p}` holds cell p at time t (negative p written `n|p|`) and
//! `q{t}_{s}` is nonzero iff the machine is at node s at time t. Cells are
//! tracked in a window −W..W around the head with W = max(T + max(0, r−2), r)
//! for r = [`Machine::max_index`]. A cell shifted in from outside the window
//! is pinned to 0; wrong values then creep inwards one cell per step, which
//! never reaches a cell read within T steps.
//!
//! The initial tape is `…0,1^m,0,1^n,0 . x₁…x_n,g₁…g_m,0…` as built by
//! [`init_input`](crate::machine::init_input): guess cells n+1..n+m with
//! their markers at −(n+2)..−(n+1+m). Guess cells and markers range up to
//! T−1 and −T, so m ≤ T−n−1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::eval::eval_pl;
use crate::logic::{Literal, PLAssignment, PLFormula};
use crate::machine::{BranchRel, Dir, Machine, Node, Op};
use crate::semiring::{SemiringId, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CookArtifact {
    pub formula: PLFormula,
    pub semiring: SemiringId,
    /// Step bound T.
    pub steps: usize,
    pub input_len: usize,
    pub window: i64,
    pub nodes: usize,
    pub prop_v: BTreeMap<(usize, i64), String>,
    pub prop_q: BTreeMap<(usize, usize), String>,
}

pub fn v_name(t: usize, p: i64) -> String {
    if p < 0 {
        format!("v{t}_n{}", -p)
    } else {
        format!("v{t}_{p}")
    }
}

pub fn q_name(t: usize, s: usize) -> String {
    format!("q{t}_{s}")
}

struct Builder {
    id: SemiringId,
    window: i64,
    parts: Vec<PLFormula>,
}

impl Builder {
    fn v(&self, t: usize, p: i64) -> PLFormula {
        PLFormula::prop(&v_name(t, p))
    }

    fn q(&self, t: usize, s: usize) -> PLFormula {
        PLFormula::prop(&q_name(t, s))
    }

    fn c(&self, v: Value) -> PLFormula {
        PLFormula::Const(v)
    }

    fn is(&self, f: PLFormula, v: Value) -> PLFormula {
        PLFormula::eq(f, self.c(v))
    }

    fn zero(&self, f: PLFormula) -> PLFormula {
        self.is(f, self.id.zero())
    }

    fn one(&self, f: PLFormula) -> PLFormula {
        self.is(f, self.id.one())
    }

    fn inside(&self, p: i64) -> bool {
        p.abs() <= self.window
    }

    fn initial(&mut self, x: &[Value], steps: i64) {
        let n = x.len() as i64;
        let w = self.window;
        for p in -w..=w {
            let v = self.v(0, p);
            let i = -p;
            let part = if p == 0 {
                self.zero(v)
            } else if (1..=n).contains(&p) {
                self.is(v, x[p as usize - 1].clone())
            } else if p > n {
                if p < steps {
                    continue; // guess cell, tied to its marker
                }
                self.zero(v)
            } else if (1..=n).contains(&i) {
                self.one(v)
            } else if i == n + 1 {
                self.zero(v)
            } else if i <= steps {
                let mut tail = self.zero(self.v(0, i - 1));
                if self.inside(i + 1) {
                    tail = PLFormula::band(self.zero(self.v(0, -(i + 1))), tail);
                }
                self.parts.push(PLFormula::bor(self.zero(v.clone()), self.one(v.clone())));
                PLFormula::bimp(self.zero(v), tail)
            } else {
                self.zero(v)
            };
            self.parts.push(part);
        }
    }

    /// Cell `p` at time t+1 under node `node`, or None for the frame.
    fn update(&self, node: &Node, t: usize, p: i64) -> Option<PLFormula> {
        let next = self.v(t + 1, p);
        match node {
            Node::Compute { target, op, .. } if *target == p => {
                let rhs = match op {
                    Op::Add(j, k) => PLFormula::or(self.v(t, *j), self.v(t, *k)),
                    Op::Mul(j, k) => PLFormula::and(self.v(t, *j), self.v(t, *k)),
                    Op::Const(c) => self.c(c.clone()),
                };
                Some(PLFormula::eq(next, rhs))
            }
            Node::Shift { dir, .. } => {
                let from = match dir {
                    Dir::Left => p + 1,
                    Dir::Right => p - 1,
                };
                Some(if self.inside(from) {
                    PLFormula::eq(next, self.v(t, from))
                } else {
                    self.zero(next)
                })
            }
            _ => None,
        }
    }

    fn step(&mut self, m: &Machine, t: usize) {
        let w = self.window;
        for p in -w..=w {
            let mut frame = Vec::new();
            for (s, node) in m.labelled() {
                match self.update(node, t, p) {
                    Some(f) => self.parts.push(PLFormula::bimp(self.q(t, s), f)),
                    None => frame.push(self.q(t, s)),
                }
            }
            if !frame.is_empty() {
                let guard = PLFormula::bor_all(frame, self.id.zero());
                let keep = PLFormula::eq(self.v(t + 1, p), self.v(t, p));
                self.parts.push(PLFormula::bimp(guard, keep));
            }
        }
        for (s, node) in m.labelled() {
            let q = self.q(t, s);
            match node {
                Node::Input { next } | Node::Compute { next, .. } | Node::Shift { next, .. } => {
                    let to = self.one(self.q(t + 1, *next));
                    self.parts.push(PLFormula::bimp(q, to));
                }
                Node::Output => {
                    let to = self.one(self.q(t + 1, s));
                    self.parts.push(PLFormula::bimp(q, to));
                }
                Node::Branch { rel, neg, pos } => {
                    let (a, b) = (self.v(t, 1), self.v(t, 2));
                    let (holds, fails) = match rel {
                        BranchRel::Eq => (
                            PLFormula::eq(a.clone(), b.clone()),
                            PLFormula::neq(a, b),
                        ),
                        BranchRel::Leq => (
                            PLFormula::leq(a.clone(), b.clone()),
                            PLFormula::not_leq(a, b),
                        ),
                    };
                    let to_neg = self.one(self.q(t + 1, *neg));
                    let to_pos = self.one(self.q(t + 1, *pos));
                    self.parts.push(PLFormula::bimp(
                        PLFormula::band(q.clone(), holds),
                        to_neg,
                    ));
                    self.parts.push(PLFormula::bimp(PLFormula::band(q, fails), to_pos));
                }
            }
        }
        self.unique(m.len(), t + 1);
    }

    fn unique(&mut self, nodes: usize, t: usize) {
        for s in 1..=nodes {
            for s2 in (1..=nodes).filter(|&s2| s2 != s) {
                let other = self.zero(self.q(t, s2));
                self.parts.push(PLFormula::bimp(self.q(t, s), other));
            }
        }
    }
}

/// φ for runs of `m` on `x` of at most `steps` steps with any guess of
/// length ≤ steps − n − 1.
pub fn cook_compile(m: &Machine, x: &[Value], steps: usize) -> Result<CookArtifact> {
    let id = m.semiring;
    if let Some(v) = x.iter().find(|v| v.id() != id) {
        return Err(Error::SemiringMismatch {
            left: id,
            right: v.id(),
        });
    }
    if steps < x.len() {
        return Err(Error::Contract(format!(
            "step bound {steps} is below the input length {}",
            x.len()
        )));
    }
    let t_max = steps as i64;
    let r = m.max_index();
    let window = (t_max + (r - 2).max(0)).max(r);
    let mut b = Builder {
        id,
        window,
        parts: Vec::new(),
    };
    b.initial(x, t_max);
    b.parts.push(b.one(b.q(0, 1)));
    for s in 2..=m.len() {
        b.parts.push(b.zero(b.q(0, s)));
    }
    for t in 0..steps {
        b.step(m, t);
    }
    let out = m.len();
    let accept = (0..=steps).map(|t| {
        let first = PLFormula::neq(b.v(t, 1), b.c(id.zero()));
        let marked = b.one(b.v(t, -1));
        PLFormula::band(b.q(t, out), PLFormula::band(first, marked))
    });
    b.parts.push(PLFormula::bor_all(accept, id.zero()));

    let mut prop_v = BTreeMap::new();
    let mut prop_q = BTreeMap::new();
    for t in 0..=steps {
        for p in -window..=window {
            prop_v.insert((t, p), v_name(t, p));
        }
        for s in 1..=m.len() {
            prop_q.insert((t, s), q_name(t, s));
        }
    }
    Ok(CookArtifact {
        formula: PLFormula::band_all(b.parts, id.one()),
        semiring: id,
        steps,
        input_len: x.len(),
        window,
        nodes: m.len(),
        prop_v,
        prop_q,
    })
}

/// The guess recorded in a satisfying assignment: the marker run from
/// −(n+2) gives m, and the guess is cells n+1..n+m at time 0.
pub fn cook_decode_guess(art: &CookArtifact, s: &PLAssignment) -> Result<Vec<Value>> {
    if eval_pl(&art.formula, s)?.is_zero() {
        return Err(Error::Contract(
            "assignment does not satisfy the compiled formula".into(),
        ));
    }
    let get = |p: i64| -> Result<&Value> {
        let name = v_name(0, p);
        s.get(&Literal::pos(&name))
            .ok_or(Error::MissingLiteral(name))
    };
    let n = art.input_len as i64;
    let mut len = 0;
    while n + 2 + len <= (art.steps as i64).min(art.window) && get(-(n + 2 + len))?.is_one() {
        len += 1;
    }
    (1..=len).map(|k| get(n + k).cloned()).collect()
}

#[cfg(test)]
mod tests;
