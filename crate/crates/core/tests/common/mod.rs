//! Generators and reference oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use scl_core::logic::{desugar_pl, FOFormula, KInterpretation, PLFormula, Vocabulary};
use scl_core::machine::{run_guess, BranchRel, Dir, Machine, Node, Op};
use scl_core::semiring::{SemiringId, Value};

pub const NAT: SemiringId = SemiringId::Natural;
pub const BOOL: SemiringId = SemiringId::Boolean;

pub fn n(v: u32) -> Value {
    Value::nat(v)
}

/// The search universe used for a semiring in the machine tests.
pub fn small_universe(id: SemiringId) -> Vec<Value> {
    match id {
        SemiringId::Boolean => vec![id.zero(), id.one()],
        _ => (0..4).map(Value::nat).collect(),
    }
}

pub fn tuples(domain: usize, arity: usize) -> Vec<Vec<usize>> {
    let count = domain.pow(arity as u32);
    (0..count)
        .map(|mut idx| {
            let mut t = vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = idx % domain;
                idx /= domain;
            }
            t
        })
        .collect()
}

pub struct Shape {
    pub nodes: std::ops::RangeInclusive<usize>,
    /// Largest |i| for a tape coordinate.
    pub reach: i64,
    pub consts: Vec<Value>,
    pub arithmetic: bool,
    pub branches: bool,
}

/// A valid machine over `id`; rejected node graphs are redrawn.
pub fn random_machine(rng: &mut ChaCha8Rng, id: SemiringId, shape: &Shape) -> Machine {
    let ordered = id.profile().ordered;
    loop {
        let len = rng.gen_range(shape.nodes.clone());
        let mut nodes = vec![Node::Input {
            next: rng.gen_range(2..=len),
        }];
        let coord = |rng: &mut ChaCha8Rng| rng.gen_range(-shape.reach..=shape.reach);
        for _ in 2..len {
            let next = rng.gen_range(2..=len);
            let node = match rng.gen_range(0..6) {
                0 | 1 if shape.branches => Node::Branch {
                    rel: if ordered && rng.gen() {
                        BranchRel::Leq
                    } else {
                        BranchRel::Eq
                    },
                    neg: next,
                    pos: rng.gen_range(2..=len),
                },
                2 => Node::Shift {
                    dir: if rng.gen() { Dir::Left } else { Dir::Right },
                    next,
                },
                3 | 4 if shape.arithmetic => Node::Compute {
                    target: coord(rng),
                    op: if rng.gen() {
                        Op::Add(coord(rng), coord(rng))
                    } else {
                        Op::Mul(coord(rng), coord(rng))
                    },
                    next,
                },
                _ => Node::Compute {
                    target: coord(rng),
                    op: Op::Const(shape.consts.choose(rng).unwrap().clone()),
                    next,
                },
            };
            nodes.push(node);
        }
        nodes.push(Node::Output);
        if let Ok(m) = Machine::new("random", id, nodes) {
            return m;
        }
    }
}

/// Machines small enough for exhaustive second-order search on a
/// 2-element domain with z = 1: coordinates in −1..1, no branches.
pub fn micro_machine(rng: &mut ChaCha8Rng, id: SemiringId) -> Machine {
    let shape = Shape {
        nodes: 2..=4,
        reach: 1,
        consts: vec![id.zero(), id.one()],
        arithmetic: true,
        branches: false,
    };
    random_machine(rng, id, &shape)
}

pub fn random_input(rng: &mut ChaCha8Rng, universe: &[Value], len: usize) -> Vec<Value> {
    (0..len).map(|_| universe.choose(rng).unwrap().clone()).collect()
}

/// Every guess over `universe` of length ≤ `max_len`, shortest first.
pub fn all_guesses(universe: &[Value], max_len: usize) -> Vec<Vec<Value>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|g: &Vec<Value>| {
                universe.iter().map(move |v| {
                    let mut h = g.clone();
                    h.push(v.clone());
                    h
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// True if no run on `x` with a guess from `universe` of length ≤ `max_len`
/// writes a value outside `universe` within `budget` steps.
pub fn stays_in(m: &Machine, x: &[Value], universe: &[Value], max_len: usize, budget: u64) -> bool {
    all_guesses(universe, max_len).iter().all(|g| {
        let r = run_guess(m, x, g, budget, true).unwrap();
        r.trace
            .unwrap()
            .writes
            .iter()
            .flatten()
            .all(|(_, v)| universe.contains(v))
    })
}

fn random_term(rng: &mut ChaCha8Rng, depth: u32, props: &[&str]) -> PLFormula {
    if depth == 0 || rng.gen_bool(0.4) {
        let name = props.choose(rng).unwrap();
        return match rng.gen_range(0..6) {
            0 => PLFormula::Const(n(rng.gen_range(0..4))),
            1 => PLFormula::neg_prop(name),
            _ => PLFormula::prop(name),
        };
    }
    let (a, b) = (random_term(rng, depth - 1, props), random_term(rng, depth - 1, props));
    if rng.gen() {
        PLFormula::and(a, b)
    } else {
        PLFormula::or(a, b)
    }
}

/// Formulas over ℕ whose nested comparisons come only from the Boolean
/// connectives, sometimes spelled out through [`desugar_pl`].
pub fn random_sugar(rng: &mut ChaCha8Rng, depth: u32, props: &[&str]) -> PLFormula {
    // a top-level conjunction keeps a fair share of the samples unsatisfiable
    let parts: Vec<PLFormula> = (0..rng.gen_range(1..=3))
        .map(|_| sugar(rng, depth, props))
        .collect();
    let f = PLFormula::band_all(parts, n(1));
    if rng.gen_bool(0.3) {
        desugar_pl(&f, NAT)
    } else {
        f
    }
}

fn sugar(rng: &mut ChaCha8Rng, depth: u32, props: &[&str]) -> PLFormula {
    if depth == 0 || rng.gen_bool(0.25) {
        let (a, b) = (random_term(rng, 2, props), random_term(rng, 2, props));
        return match rng.gen_range(0..5) {
            0 => PLFormula::eq(a, b),
            1 => PLFormula::leq(a, b),
            2 => PLFormula::neq(a, b),
            3 => PLFormula::not_leq(a, b),
            _ => a,
        };
    }
    let a = sugar(rng, depth - 1, props);
    let b = sugar(rng, depth - 1, props);
    match rng.gen_range(0..6) {
        0 => PLFormula::band(a, b),
        1 => PLFormula::bor(a, b),
        2 => PLFormula::bimp(a, b),
        3 => PLFormula::bnot(a),
        4 => PLFormula::and(a, b),
        _ => PLFormula::or(a, b),
    }
}

/// Boolean structures for the classical oracle: P unary, R binary.
pub fn boolean_vocab() -> Vocabulary {
    [("P".to_string(), 1), ("R".to_string(), 2)].into()
}

pub struct Structure {
    pub domain: usize,
    pub p: BTreeSet<usize>,
    pub r: BTreeSet<(usize, usize)>,
}

pub fn random_structure(rng: &mut ChaCha8Rng, max_domain: usize) -> Structure {
    let domain = rng.gen_range(1..=max_domain);
    let p = (0..domain).filter(|_| rng.gen()).collect();
    let r = tuples(domain, 2)
        .into_iter()
        .filter(|_| rng.gen_bool(0.4))
        .map(|t| (t[0], t[1]))
        .collect();
    Structure { domain, p, r }
}

/// The model-defining 𝔹-interpretation of a structure.
pub fn as_interpretation(a: &Structure) -> KInterpretation {
    let mut pi = KInterpretation::new(BOOL, a.domain, &boolean_vocab());
    for t in tuples(a.domain, 1) {
        let v = a.p.contains(&t[0]);
        pi.set("P", &t, false, Value::Bool(v)).unwrap();
        pi.set("P", &t, true, Value::Bool(!v)).unwrap();
    }
    for t in tuples(a.domain, 2) {
        let v = a.r.contains(&(t[0], t[1]));
        pi.set("R", &t, false, Value::Bool(v)).unwrap();
        pi.set("R", &t, true, Value::Bool(!v)).unwrap();
    }
    pi
}

/// Random sentences over {P, R} with variables x, y, z and 𝔹 constants.
pub fn random_sentence(rng: &mut ChaCha8Rng, depth: u32) -> FOFormula {
    let mut f = random_fo(rng, depth);
    for x in ["z", "y", "x"] {
        if rng.gen() {
            f = FOFormula::exists(x, f);
        } else {
            f = FOFormula::forall(x, f);
        }
    }
    f
}

fn random_fo(rng: &mut ChaCha8Rng, depth: u32) -> FOFormula {
    let var = |rng: &mut ChaCha8Rng| *["x", "y", "z"].choose(rng).unwrap();
    if depth == 0 || rng.gen_bool(0.25) {
        let (a, b) = (var(rng), var(rng));
        return match rng.gen_range(0..7) {
            0 => FOFormula::var_eq(a, b),
            1 => FOFormula::VarNeq(a.into(), b.into()),
            2 => FOFormula::Const(Value::Bool(rng.gen())),
            3 => FOFormula::neg_atom("P", &[a]),
            4 => FOFormula::atom("P", &[a]),
            5 => FOFormula::neg_atom("R", &[a, b]),
            _ => FOFormula::atom("R", &[a, b]),
        };
    }
    let x = var(rng);
    let a = random_fo(rng, depth - 1);
    let b = random_fo(rng, depth - 1);
    match rng.gen_range(0..13) {
        0 => FOFormula::and(a, b),
        1 => FOFormula::or(a, b),
        2 => FOFormula::eq(a, b),
        3 => FOFormula::leq(a, b),
        4 => FOFormula::neq(a, b),
        5 => FOFormula::not_leq(a, b),
        6 => FOFormula::bnot(a),
        7 => FOFormula::band(a, b),
        8 => FOFormula::bor(a, b),
        9 => FOFormula::bimp(a, b),
        10 => FOFormula::exists(x, a),
        _ => FOFormula::forall(x, a),
    }
}

/// Classical two-valued satisfaction, written against the structure
/// directly rather than through semiring values.
pub fn tarski(f: &FOFormula, a: &Structure, env: &mut Vec<(String, usize)>) -> bool {
    use FOFormula as F;
    let look = |env: &Vec<(String, usize)>, x: &str| {
        env.iter().rev().find(|(y, _)| y == x).expect("free variable").1
    };
    match f {
        F::VarEq(x, y) => look(env, x) == look(env, y),
        F::VarNeq(x, y) => look(env, x) != look(env, y),
        F::Const(c) => !c.is_zero(),
        F::Atom(r, xs) | F::NegAtom(r, xs) => {
            let args: Vec<usize> = xs.iter().map(|x| look(env, x)).collect();
            let holds = match r.as_str() {
                "P" => a.p.contains(&args[0]),
                "R" => a.r.contains(&(args[0], args[1])),
                other => panic!("unknown relation {other}"),
            };
            holds == matches!(f, F::Atom(..))
        }
        F::And(l, r) | F::BAnd(l, r) => tarski(l, a, env) && tarski(r, a, env),
        F::Or(l, r) | F::BOr(l, r) => tarski(l, a, env) || tarski(r, a, env),
        F::Eq(l, r) => tarski(l, a, env) == tarski(r, a, env),
        F::Neq(l, r) => tarski(l, a, env) != tarski(r, a, env),
        F::Leq(l, r) | F::BImp(l, r) => !tarski(l, a, env) || tarski(r, a, env),
        F::NotLeq(l, r) => tarski(l, a, env) && !tarski(r, a, env),
        F::BNot(l) => !tarski(l, a, env),
        F::Exists(x, body) | F::Forall(x, body) => {
            let mut results = (0..a.domain).map(|e| {
                env.push((x.clone(), e));
                let v = tarski(body, a, env);
                env.pop();
                v
            });
            if matches!(f, F::Exists(..)) {
                results.any(|v| v)
            } else {
                results.all(|v| v)
            }
        }
    }
}

pub fn pick_value(rng: &mut ChaCha8Rng, id: SemiringId) -> Value {
    // the default universes plus one value off {0, 1} per semiring
    let mut pool = id.default_universe();
    pool.push(match id {
        SemiringId::Boolean => id.one(),
        SemiringId::Natural => n(7),
        SemiringId::NonnegRational => Value::rational(5, 3).unwrap(),
        SemiringId::Tropical => Value::tropical(3, 2),
        SemiringId::Lukasiewicz => Value::lukasiewicz(1, 3).unwrap(),
        SemiringId::NaturalPolynomial => {
            scl_core::semiring::parse_value("#poly{2*x*y + 1}", id).unwrap()
        }
    });
    pool.choose(rng).unwrap().clone()
}

pub fn random_pl(rng: &mut ChaCha8Rng, id: SemiringId, depth: u32) -> PLFormula {
    let names = ["p0", "q", "long_name", "x1"];
    if depth == 0 || rng.gen_bool(0.25) {
        let name = names.choose(rng).unwrap();
        return match rng.gen_range(0..3) {
            0 => PLFormula::Const(pick_value(rng, id)),
            1 => PLFormula::neg_prop(name),
            _ => PLFormula::prop(name),
        };
    }
    let a = random_pl(rng, id, depth - 1);
    let b = random_pl(rng, id, depth - 1);
    match rng.gen_range(0..10) {
        0 => PLFormula::and(a, b),
        1 => PLFormula::or(a, b),
        2 => PLFormula::eq(a, b),
        3 => PLFormula::leq(a, b),
        4 => PLFormula::neq(a, b),
        5 => PLFormula::not_leq(a, b),
        6 => PLFormula::bnot(a),
        7 => PLFormula::band(a, b),
        8 => PLFormula::bor(a, b),
        _ => PLFormula::bimp(a, b),
    }
}

/// Like [`random_sentence`] but over any semiring and not necessarily closed.
pub fn random_fo_over(rng: &mut ChaCha8Rng, id: SemiringId, depth: u32) -> FOFormula {
    let var = |rng: &mut ChaCha8Rng| *["x", "y", "z"].choose(rng).unwrap();
    if depth == 0 || rng.gen_bool(0.25) {
        let (a, b) = (var(rng), var(rng));
        return match rng.gen_range(0..5) {
            0 => FOFormula::var_eq(a, b),
            1 => FOFormula::VarNeq(a.into(), b.into()),
            2 => FOFormula::Const(pick_value(rng, id)),
            3 => FOFormula::neg_atom("R", &[a, b]),
            _ => FOFormula::atom("P", &[a]),
        };
    }
    let x = var(rng);
    let a = random_fo_over(rng, id, depth - 1);
    let b = random_fo_over(rng, id, depth - 1);
    match rng.gen_range(0..8) {
        0 => FOFormula::and(a, b),
        1 => FOFormula::or(a, b),
        2 => FOFormula::eq(a, b),
        3 => FOFormula::not_leq(a, b),
        4 => FOFormula::exists(x, a),
        5 => FOFormula::forall(x, a),
        6 => FOFormula::bor(a, b),
        _ => FOFormula::bnot(a),
    }
}

pub fn random_interpretation(rng: &mut ChaCha8Rng, id: SemiringId) -> KInterpretation {
    let vocab: Vocabulary = [("P".to_string(), 1), ("R".to_string(), 2), ("C".to_string(), 0)].into();
    let domain = rng.gen_range(1..4);
    let mut pi = if rng.gen() {
        KInterpretation::ordered(id, domain, &vocab)
    } else {
        KInterpretation::new(id, domain, &vocab)
    };
    for (name, arity) in &vocab {
        for t in tuples(domain, *arity) {
            pi.set(name, &t, false, pick_value(rng, id)).unwrap();
            pi.set(name, &t, true, pick_value(rng, id)).unwrap();
        }
    }
    pi
}

pub fn random_assignment(rng: &mut ChaCha8Rng, id: SemiringId) -> scl_core::logic::PLAssignment {
    use scl_core::logic::{Literal, PLAssignment};
    let mut s = PLAssignment::new(id);
    for name in ["a", "b", "c", "d"] {
        if rng.gen_bool(0.7) {
            s.set(Literal::pos(name), pick_value(rng, id)).unwrap();
        }
        if rng.gen_bool(0.5) {
            s.set(Literal::neg(name), pick_value(rng, id)).unwrap();
        }
    }
    s
}
