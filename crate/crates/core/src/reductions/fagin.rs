//! Machine runs as an existential second-order sentence over ordered
//! structures with one unary relation `I`.
//!
//! Over A = {a₀ … a_{n−1}} a time is a z-tuple read as a base-n number
//! (big-endian, a₀ the digit 0) and a cell is a tuple (d, ū): d = a₁ gives
//! +val(ū), d = a₀ gives −val(ū). The tuple (a₀, a₀…a₀) and every tuple
//! with d ∉ {a₀, a₁} name no cell and carry 0. `V(t̄, d, ū)` is the cell
//! content and `Qs(t̄)` marks the node. Successors saturate: the largest time
//! and the outermost cells are their own successors. Cells beyond ±(n^z − 1)
//! are dropped, so the sentence describes the run on a truncated tape.
//!
//! The input sits at cells 1..n (cell k holds `I(a_{k−1})`), ones at −1..−n,
//! and a guess with its markers beyond the separator at −(n+1), laid out as
//! [`init_input`]. A guess marker at −k (k ≥ n+2) is 0 or 1; a 0 forces the
//! next marker and the guess cell k−1 to 0.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::logic::{ESOSentence, FOFormula, KInterpretation, ORDER_REL};
use crate::machine::{init_input, BranchRel, Dir, Machine, Node, Op, Trace};
use crate::semiring::{compare, Relation, SemiringId, SemiringProfile, Value};

type F = FOFormula;

pub const INPUT_REL: &str = "I";
pub const TAPE_REL: &str = "V";

pub fn node_rel(s: usize) -> String {
    format!("Q{s}")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaginArtifact {
    pub sentence: ESOSentence,
    pub z: usize,
    pub nodes: usize,
    pub semiring: SemiringId,
}

/// A position tuple: sign variable and magnitude digits.
#[derive(Clone)]
struct Pos {
    d: String,
    u: Vec<String>,
}

impl Pos {
    fn vars(&self) -> Vec<String> {
        let mut v = vec![self.d.clone()];
        v.extend(self.u.iter().cloned());
        v
    }
}

struct Gen {
    z: usize,
    id: SemiringId,
    fresh: usize,
}

fn band_all(items: Vec<F>, id: SemiringId) -> F {
    F::band_all(items, id.one())
}

fn bor_all(items: Vec<F>, id: SemiringId) -> F {
    F::bor_all(items, id.zero())
}

impl Gen {
    fn var(&mut self, stem: &str) -> String {
        self.fresh += 1;
        format!("{stem}{}", self.fresh)
    }

    fn tuple(&mut self, stem: &str) -> Vec<String> {
        (0..self.z).map(|_| self.var(stem)).collect()
    }

    fn pos(&mut self) -> Pos {
        Pos {
            d: self.var("d"),
            u: self.tuple("u"),
        }
    }

    fn f(&self) -> F {
        F::Const(self.id.zero())
    }

    fn lt(x: &str, y: &str) -> F {
        F::atom(ORDER_REL, &[x, y])
    }

    fn not_lt(x: &str, y: &str) -> F {
        F::neg_atom(ORDER_REL, &[x, y])
    }

    fn min(&mut self, x: &str) -> F {
        let w = self.var("w");
        F::forall(&w, Self::not_lt(&w, x))
    }

    fn max(&mut self, x: &str) -> F {
        let w = self.var("w");
        F::forall(&w, Self::not_lt(x, &w))
    }

    fn succ(&mut self, x: &str, y: &str) -> F {
        let w = self.var("w");
        F::band(
            Self::lt(x, y),
            F::forall(&w, F::bor(Self::not_lt(x, &w), Self::not_lt(&w, y))),
        )
    }

    fn a0(&mut self, x: &str) -> F {
        self.min(x)
    }

    fn a1(&mut self, x: &str) -> F {
        let m = self.var("m");
        let body = F::band(self.min(&m), self.succ(&m, x));
        F::exists(&m, body)
    }

    fn all_min(&mut self, u: &[String]) -> F {
        let parts = u.iter().map(|x| self.min(x)).collect();
        band_all(parts, self.id)
    }

    fn all_max(&mut self, u: &[String]) -> F {
        let parts = u.iter().map(|x| self.max(x)).collect();
        band_all(parts, self.id)
    }

    fn tuple_eq(&self, u: &[String], v: &[String]) -> F {
        let parts = u.iter().zip(v).map(|(a, b)| F::var_eq(a, b)).collect();
        band_all(parts, self.id)
    }

    /// v̄ = ū + 1, false at the maximum.
    fn inc(&mut self, u: &[String], v: &[String]) -> F {
        let mut cases = Vec::new();
        for k in 0..u.len() {
            let mut parts = vec![self.tuple_eq(&u[..k], &v[..k])];
            parts.push(self.succ(&u[k], &v[k]));
            for j in k + 1..u.len() {
                parts.push(self.max(&u[j]));
                parts.push(self.min(&v[j]));
            }
            cases.push(band_all(parts, self.id));
        }
        bor_all(cases, self.id)
    }

    /// v̄ = ū + 1, saturating at the maximum.
    fn inc_sat(&mut self, u: &[String], v: &[String]) -> F {
        let top = F::band(self.all_max(u), self.tuple_eq(u, v));
        F::bor(self.inc(u, v), top)
    }

    fn lex_less(&self, u: &[String], v: &[String]) -> F {
        let cases = (0..u.len())
            .map(|k| F::band(self.tuple_eq(&u[..k], &v[..k]), Self::lt(&u[k], &v[k])))
            .collect();
        bor_all(cases, self.id)
    }

    /// val(ū) = k.
    fn is_val(&mut self, k: u64, u: &[String]) -> F {
        if k == 0 {
            return self.all_min(u);
        }
        let y = self.tuple("y");
        let body = F::band(self.is_val(k - 1, &y), self.inc(&y, u));
        F::exists_all(&y, body)
    }

    /// The cell tuple of the fixed index `i`.
    fn is_pos(&mut self, i: i64, p: &Pos) -> F {
        let sign = if i >= 0 { self.a1(&p.d) } else { self.a0(&p.d) };
        F::band(sign, self.is_val(i.unsigned_abs(), &p.u))
    }

    fn valid(&mut self, p: &Pos) -> F {
        let neg = F::band(self.a0(&p.d), F::bnot(self.all_min(&p.u)));
        F::bor(self.a1(&p.d), neg)
    }

    /// q̄ is the cell right of p̄, saturating at the right end.
    fn next_pos(&mut self, p: &Pos, q: &Pos) -> F {
        let right = band_all(
            vec![self.a1(&p.d), self.a1(&q.d), self.inc_sat(&p.u, &q.u)],
            self.id,
        );
        let beyond_one = F::band(F::bnot(self.all_min(&p.u)), F::bnot(self.is_val(1, &p.u)));
        let left = band_all(
            vec![self.a0(&p.d), self.a0(&q.d), beyond_one, self.inc(&q.u, &p.u)],
            self.id,
        );
        let cross = band_all(
            vec![
                self.a0(&p.d),
                self.is_val(1, &p.u),
                self.a1(&q.d),
                self.all_min(&q.u),
            ],
            self.id,
        );
        bor_all(vec![right, left, cross], self.id)
    }

    /// q̄ is the cell left of p̄, saturating at the left end.
    fn prev_pos(&mut self, p: &Pos, q: &Pos) -> F {
        let left = band_all(
            vec![
                self.a0(&p.d),
                F::bnot(self.all_min(&p.u)),
                self.a0(&q.d),
                self.inc_sat(&p.u, &q.u),
            ],
            self.id,
        );
        let right = band_all(
            vec![
                self.a1(&p.d),
                F::bnot(self.all_min(&p.u)),
                self.a1(&q.d),
                self.inc(&q.u, &p.u),
            ],
            self.id,
        );
        let cross = band_all(
            vec![
                self.a1(&p.d),
                self.all_min(&p.u),
                self.a0(&q.d),
                self.is_val(1, &q.u),
            ],
            self.id,
        );
        bor_all(vec![left, right, cross], self.id)
    }

    fn cell(&self, t: &[String], p: &Pos) -> F {
        let mut args: Vec<&str> = t.iter().map(String::as_str).collect();
        args.push(&p.d);
        args.extend(p.u.iter().map(String::as_str));
        F::atom(TAPE_REL, &args)
    }

    fn node_is(&self, s: usize, t: &[String], v: Value) -> F {
        let args: Vec<&str> = t.iter().map(String::as_str).collect();
        F::eq(F::atom(&node_rel(s), &args), F::Const(v))
    }

    /// ∃q̄ (q̄ is cell i ∧ body(q̄)).
    fn at(&mut self, i: i64, body: impl FnOnce(&mut Gen, &Pos) -> F) -> F {
        let q = self.pos();
        let inner = F::band(self.is_pos(i, &q), body(self, &q));
        F::exists_all(&q.vars(), inner)
    }

    /// ∃ē (ē = (a₀,…,a₀,x)) ∧ ū = ē + 1): val(ū) = index(x) + 1.
    fn low_inc(&mut self, x: &str, u: &[String]) -> F {
        let e = self.tuple("e");
        let mut parts: Vec<F> = e[..self.z - 1].iter().map(|v| self.min(v)).collect::<Vec<_>>();
        parts.push(F::var_eq(&e[self.z - 1], x));
        parts.push(self.inc(&e, u));
        F::exists_all(&e, band_all(parts, self.id))
    }

    /// val(ū) = n.
    fn is_n(&mut self, u: &[String]) -> F {
        if self.z < 2 {
            return self.f();
        }
        let z = self.z;
        let mut parts: Vec<F> = u[..z - 2].iter().map(|v| self.min(v)).collect::<Vec<_>>();
        parts.push(self.a1(&u[z - 2]));
        parts.push(self.min(&u[z - 1]));
        band_all(parts, self.id)
    }

    /// val(ū) ≥ k + 1 where `base` defines the number k.
    fn above(&mut self, u: &[String], base: impl FnOnce(&mut Gen, &[String]) -> F) -> F {
        let e = self.tuple("e");
        let body = F::band(base(self, &e), self.lex_less(&e, u));
        F::exists_all(&e, body)
    }

    fn is_n_plus_1(&mut self, u: &[String]) -> F {
        let e = self.tuple("e");
        let body = F::band(self.is_n(&e), self.inc(&e, u));
        F::exists_all(&e, body)
    }

    /// The time-0 content of cell p̄.
    fn initial(&mut self, t: &[String], p: &Pos) -> F {
        let id = self.id;
        let cell = self.cell(t, p);
        let is = |v: Value| F::eq(cell.clone(), F::Const(v));
        let mut parts = Vec::new();

        let origin = F::band(self.a1(&p.d), self.all_min(&p.u));
        parts.push(F::bimp(origin, is(id.zero())));

        let x = self.var("x");
        let input = F::band(self.a1(&p.d), self.low_inc(&x, &p.u));
        let value = F::eq(cell.clone(), F::atom(INPUT_REL, &[&x]));
        parts.push(F::forall(&x, F::bimp(input, value)));

        let x = self.var("x");
        let ones = F::band(self.a0(&p.d), self.low_inc(&x, &p.u));
        parts.push(F::forall(&x, F::bimp(ones, is(id.one()))));

        let sep = F::band(self.a0(&p.d), self.is_n_plus_1(&p.u));
        parts.push(F::bimp(sep, is(id.zero())));

        // guess markers at −k, k ≥ n+2
        let marker = F::band(
            self.a0(&p.d),
            self.above(&p.u, |g, e| g.is_n_plus_1(e)),
        );
        let q = self.pos();
        let next_zero = F::band(self.prev_pos(p, &q), F::eq(self.cell(t, &q), F::Const(id.zero())));
        let next_zero = F::exists_all(&q.vars(), next_zero);
        let (d2, y) = (self.var("d"), self.tuple("y"));
        let g = Pos { d: d2, u: y };
        let guess_zero = band_all(
            vec![
                self.a1(&g.d),
                self.inc(&g.u, &p.u),
                F::eq(self.cell(t, &g), F::Const(id.zero())),
            ],
            id,
        );
        let guess_zero = F::exists_all(&g.vars(), guess_zero);
        let bit = F::bor(is(id.zero()), is(id.one()));
        let chain = F::bimp(is(id.zero()), F::band(next_zero, guess_zero));
        parts.push(F::bimp(marker, F::band(bit, chain)));

        // the outermost positive cell has no marker
        let top = band_all(
            vec![
                self.a1(&p.d),
                self.all_max(&p.u),
                self.above(&p.u, |g, e| g.is_n(e)),
            ],
            id,
        );
        parts.push(F::bimp(top, is(id.zero())));
        band_all(parts, id)
    }

    fn frame(&mut self, t: &[String], t2: &[String], p: &Pos) -> F {
        let keep = F::eq(self.cell(t2, p), self.cell(t, p));
        F::bimp(self.valid(p), keep)
    }

    fn shifted(&mut self, dir: Dir, t: &[String], t2: &[String], p: &Pos) -> F {
        let q = self.pos();
        let adj = match dir {
            Dir::Left => self.next_pos(p, &q),
            Dir::Right => self.prev_pos(p, &q),
        };
        let moved = F::band(adj, F::eq(self.cell(t2, p), self.cell(t, &q)));
        F::bimp(self.valid(p), F::exists_all(&q.vars(), moved))
    }

    fn compute(&mut self, target: i64, op: &Op, t: &[String], t2: &[String], p: &Pos) -> F {
        let t2v = t2.to_vec();
        let tv = t.to_vec();
        let write = match op {
            Op::Const(c) => {
                let c = c.clone();
                self.at(target, |g, qi| F::eq(g.cell(&t2v, qi), F::Const(c)))
            }
            Op::Add(j, k) | Op::Mul(j, k) => {
                let add = matches!(op, Op::Add(..));
                let (j, k) = (*j, *k);
                self.at(target, |g, qi| {
                    g.at(j, |g, qj| {
                        g.at(k, |g, qk| {
                            let (a, b) = (g.cell(&tv, qj), g.cell(&tv, qk));
                            let rhs = if add { F::or(a, b) } else { F::and(a, b) };
                            F::eq(g.cell(&t2v, qi), rhs)
                        })
                    })
                })
            }
        };
        let off = F::band(self.valid(p), F::bnot(self.is_pos(target, p)));
        let keep = F::eq(self.cell(t2, p), self.cell(t, p));
        F::band(write, F::bimp(off, keep))
    }

    /// Nonzero iff cell 1 ⋈ cell 2 at time t̄.
    fn compare(&mut self, rel: BranchRel, holds: bool, t: &[String]) -> F {
        let tv = t.to_vec();
        self.at(1, |g, q1| {
            g.at(2, |g, q2| {
                let (a, b) = (g.cell(&tv, q1), g.cell(&tv, q2));
                match (rel, holds) {
                    (BranchRel::Eq, true) => F::eq(a, b),
                    (BranchRel::Eq, false) => F::neq(a, b),
                    (BranchRel::Leq, true) => F::leq(a, b),
                    (BranchRel::Leq, false) => F::not_leq(a, b),
                }
            })
        })
    }

    fn accepting(&mut self, t: &[String]) -> F {
        let id = self.id;
        let tv = t.to_vec();
        let first = self.at(1, |g, q| F::neq(g.cell(&tv, q), F::Const(id.zero())));
        let marked = self.at(-1, |g, q| F::eq(g.cell(&tv, q), F::Const(id.one())));
        F::band(first, marked)
    }
}

/// Indices named by fixed positions in the sentence for `m`.
fn fixed_positions(m: &Machine) -> Vec<i64> {
    let mut out = vec![1, -1];
    for node in m.nodes() {
        out.extend(node.coordinates());
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Φ for `m` with time and magnitude tuples of length `z`.
pub fn fagin_compile(m: &Machine, z: usize) -> Result<FaginArtifact> {
    if z == 0 {
        return Err(Error::Compile("z must be at least 1".into()));
    }
    let reach = (1u128 << z.min(100)) - 1;
    if let Some(i) = fixed_positions(m)
        .into_iter()
        .find(|i| i.unsigned_abs() as u128 > reach)
    {
        return Err(Error::Compile(format!(
            "cell {i} needs more than z = {z} digits on a 2-element domain (reach ±{reach})"
        )));
    }
    let id = m.semiring;
    let mut g = Gen { z, id, fresh: 0 };
    let t: Vec<String> = (0..z).map(|k| format!("t{k}")).collect();
    let t2: Vec<String> = (0..z).map(|k| format!("s{k}")).collect();
    let p = Pos {
        d: "d".into(),
        u: (0..z).map(|k| format!("p{k}")).collect(),
    };
    let one = id.one();
    let zero = id.zero();
    let n_nodes = m.len();

    let mut body = Vec::new();
    body.push(F::bimp(F::bnot(g.valid(&p)), F::eq(g.cell(&t, &p), F::Const(zero.clone()))));
    let start = F::band(g.node_is(1, &t, one.clone()), g.initial(&t, &p));
    body.push(F::bimp(g.all_min(&t), start));

    for (s, node) in m.labelled() {
        let active = g.node_is(s, &t, one.clone());
        let goto = |g: &Gen, s2: usize| g.node_is(s2, &t2, one.clone());
        match node {
            Node::Input { next } => {
                let then = F::band(goto(&g, *next), g.frame(&t, &t2, &p));
                body.push(F::bimp(active, then));
            }
            Node::Output => {
                let then = band_all(
                    vec![goto(&g, s), g.frame(&t, &t2, &p), g.accepting(&t)],
                    id,
                );
                body.push(F::bimp(active, then));
            }
            Node::Compute { target, op, next } => {
                let then = F::band(goto(&g, *next), g.compute(*target, op, &t, &t2, &p));
                body.push(F::bimp(active, then));
            }
            Node::Shift { dir, next } => {
                let then = F::band(goto(&g, *next), g.shifted(*dir, &t, &t2, &p));
                body.push(F::bimp(active, then));
            }
            Node::Branch { rel, neg, pos } => {
                let holds = F::band(active.clone(), g.compare(*rel, true, &t));
                body.push(F::bimp(holds, goto(&g, *neg)));
                let fails = F::band(active.clone(), g.compare(*rel, false, &t));
                body.push(F::bimp(fails, goto(&g, *pos)));
                let frame = g.frame(&t, &t2, &p);
                body.push(F::bimp(active, frame));
            }
        }
    }
    for s in 1..=n_nodes {
        let others = (1..=n_nodes)
            .filter(|&s2| s2 != s)
            .map(|s2| g.node_is(s2, &t, zero.clone()))
            .collect();
        body.push(F::bimp(g.node_is(s, &t, one.clone()), band_all(others, id)));
    }

    let step = F::band(g.inc_sat(&t, &t2), band_all(body, id));
    let mut all: Vec<String> = t.clone();
    all.extend(p.vars());
    let main = F::forall_all(&all, F::exists_all(&t2, step));
    let h: Vec<String> = (0..z).map(|k| format!("h{k}")).collect();
    let halts = F::exists_all(&h, g.node_is(n_nodes, &h, one));
    let matrix = F::band(main, halts);

    let mut prefix = vec![(TAPE_REL.to_string(), 2 * z + 1)];
    for s in 1..=n_nodes {
        prefix.push((node_rel(s), z));
    }
    Ok(FaginArtifact {
        sentence: ESOSentence { prefix, matrix },
        z,
        nodes: n_nodes,
        semiring: id,
    })
}

/// The ordered structure of `x`: domain {a₀ … a_{n−1}} with I(a_k) = x_{k+1},
/// model-defining.
pub fn fagin_input(semiring: SemiringId, x: &[Value]) -> Result<KInterpretation> {
    if x.len() < 2 {
        return Err(Error::Contract(
            "the input structure needs at least two elements".into(),
        ));
    }
    let vocab: BTreeMap<String, usize> = [(INPUT_REL.to_string(), 1)].into();
    let mut pi = KInterpretation::ordered(semiring, x.len(), &vocab);
    for (k, v) in x.iter().enumerate() {
        pi.set_model_defining(INPUT_REL, &[k], v.clone())?;
    }
    Ok(pi)
}

fn digits(mut v: u64, n: usize, z: usize) -> Vec<usize> {
    let mut out = vec![0; z];
    for slot in out.iter_mut().rev() {
        *slot = (v % n as u64) as usize;
        v /= n as u64;
    }
    out
}

/// The cell named by (d, ū), if any.
fn cell_of(d: usize, u: &[usize], n: usize) -> Option<i64> {
    let val = u.iter().fold(0i64, |acc, &a| acc * n as i64 + a as i64);
    match d {
        1 => Some(val),
        0 if val > 0 => Some(-val),
        _ => None,
    }
}

/// Reruns `m` on the truncated tape −reach..reach with saturating shifts.
/// Returns the node and tape at each time 0..=horizon.
fn replay(
    m: &Machine,
    x: &[Value],
    guess: &[Value],
    reach: i64,
    horizon: u64,
) -> Result<Vec<(usize, BTreeMap<i64, Value>)>> {
    let id = m.semiring;
    let profile = SemiringProfile::of(id);
    let full = init_input(id, x, Some(guess));
    let mut tape: BTreeMap<i64, Value> = (-reach..=reach).map(|i| (i, full.get(i).clone())).collect();
    let get = |tape: &BTreeMap<i64, Value>, i: i64| tape[&i].clone();
    let mut node = 1;
    let mut out = Vec::new();
    for _ in 0..=horizon {
        out.push((node, tape.clone()));
        node = match m.node(node) {
            Node::Output => node,
            Node::Input { next } => *next,
            Node::Compute { target, op, next } => {
                let v = match op {
                    Op::Add(j, k) => get(&tape, *j).add(&get(&tape, *k))?,
                    Op::Mul(j, k) => get(&tape, *j).mul(&get(&tape, *k))?,
                    Op::Const(c) => c.clone(),
                };
                tape.insert(*target, v);
                *next
            }
            Node::Branch { rel, neg, pos } => {
                let rel = match rel {
                    BranchRel::Eq => Relation::Eq,
                    BranchRel::Leq => Relation::Leq,
                };
                if compare(&profile, rel, &get(&tape, 1), &get(&tape, 2))?.holds() {
                    *neg
                } else {
                    *pos
                }
            }
            Node::Shift { dir, next } => {
                let old = tape.clone();
                for i in -reach..=reach {
                    let from = match dir {
                        Dir::Left => (i + 1).min(reach),
                        Dir::Right => (i - 1).max(-reach),
                    };
                    tape.insert(i, old[&from].clone());
                }
                *next
            }
        };
    }
    Ok(out)
}

/// The extension (V, Q₁ … Q_N) describing an accepting run of `m` on the
/// input encoded by `pi` with `guess`.
///
/// The run is replayed on the truncated tape the sentence describes; if its
/// node sequence or acceptance differs from `trace`, the trace depends on
/// cells the sentence cannot see and this is a contract violation.
pub fn fagin_witness_from_trace(
    m: &Machine,
    z: usize,
    pi: &KInterpretation,
    trace: &Trace,
    guess: &[Value],
) -> Result<KInterpretation> {
    let id = m.semiring;
    let n = pi.domain;
    if n < 2 {
        return Err(Error::Contract("domain needs at least two elements".into()));
    }
    let size = (n as u128)
        .checked_pow(z as u32)
        .filter(|s| *s <= 1 << 20)
        .ok_or_else(|| Error::Contract(format!("n^z = {n}^{z} is too large")))?;
    let horizon = size as u64 - 1;
    let reach = horizon as i64;
    let steps = trace.configs.len().saturating_sub(1) as u64;
    if steps > horizon {
        return Err(Error::Contract(format!(
            "trace takes {steps} steps, more than n^z − 1 = {horizon}"
        )));
    }
    let x = (0..n)
        .map(|k| pi.get(INPUT_REL, &[k], false).cloned())
        .collect::<Result<Vec<_>>>()?;
    if !guess.is_empty() && (n + guess.len()) as i64 >= reach {
        return Err(Error::Contract(format!(
            "guess of length {} does not fit below cell {reach}",
            guess.len()
        )));
    }
    let run = replay(m, &x, guess, reach, horizon)?;
    let last = trace
        .configs
        .last()
        .ok_or_else(|| Error::Contract("empty trace".into()))?;
    let out = m.output_label();
    if last.node != out {
        return Err(Error::Contract("trace does not halt".into()));
    }
    for (t, cfg) in trace.configs.iter().enumerate() {
        if run[t].0 != cfg.node {
            return Err(Error::Contract(format!(
                "truncated replay leaves the trace at step {t}"
            )));
        }
    }
    let tape = &run[steps as usize].1;
    if tape[&1].is_zero() || !tape[&-1].is_one() {
        return Err(Error::Contract(
            "run does not accept on the truncated tape".into(),
        ));
    }

    let mut vocab = BTreeMap::new();
    vocab.insert(TAPE_REL.to_string(), 2 * z + 1);
    for s in 1..=m.len() {
        vocab.insert(node_rel(s), z);
    }
    let mut ext = KInterpretation::new(id, n, &vocab);
    for (name, &arity) in &vocab {
        for idx in 0..crate::logic::tuple_count(n, arity) {
            let tuple = digits(idx as u64, n, arity);
            ext.set_model_defining(name, &tuple, id.zero())?;
        }
    }
    for (t, (node, tape)) in run.iter().enumerate() {
        let tt = digits(t as u64, n, z);
        ext.set_model_defining(&node_rel(*node), &tt, id.one())?;
        for d in 0..2 {
            for mag in 0..size as u64 {
                let u = digits(mag, n, z);
                let Some(c) = cell_of(d, &u, n) else { continue };
                let mut args = tt.clone();
                args.push(d);
                args.extend(u);
                ext.set_model_defining(TAPE_REL, &args, tape[&c].clone())?;
            }
        }
    }
    Ok(ext)
}

#[cfg(test)]
mod tests;
