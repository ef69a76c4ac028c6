mod common;

use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scl_core::eval::eval_pl;
use scl_core::eval::eval_fo;
use scl_core::logic::{desugar_pl, FOAssignment, Literal, PLAssignment, PLFormula};
use scl_core::semiring::{SemiringId, Value};

#[test]
fn boolean_semantics_is_classical() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let a = random_structure(&mut rng, 4);
        let f = random_sentence(&mut rng, 4);
        let got = eval_fo(&f, &as_interpretation(&a), &FOAssignment::new()).unwrap();
        assert_eq!(!got.is_zero(), tarski(&f, &a, &mut Vec::new()), "{f:?}");
    }
}

fn random_assignment(rng: &mut ChaCha8Rng, id: SemiringId, props: &[&str]) -> PLAssignment {
    let pool = id.default_universe();
    let mut s = PLAssignment::new(id);
    for p in props {
        for l in [Literal::pos(p), Literal::neg(p)] {
            s.set(l, pool.choose(rng).unwrap().clone()).unwrap();
        }
    }
    s
}

/// Sums and products of literals and constants only.
fn random_positive(rng: &mut ChaCha8Rng, id: SemiringId, depth: u32) -> PLFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        let p = *["p", "q", "r"].choose(rng).unwrap();
        return match rng.gen_range(0..4) {
            0 => PLFormula::Const(id.default_universe().choose(rng).unwrap().clone()),
            1 => PLFormula::neg_prop(p),
            _ => PLFormula::prop(p),
        };
    }
    let a = random_positive(rng, id, depth - 1);
    let b = random_positive(rng, id, depth - 1);
    if rng.gen() {
        PLFormula::and(a, b)
    } else {
        PLFormula::or(a, b)
    }
}

/// The image of `f` and `s` under a ↦ (a ≠ 0).
fn support(f: &PLFormula) -> PLFormula {
    match f {
        PLFormula::Const(c) => PLFormula::Const(Value::Bool(!c.is_zero())),
        PLFormula::And(a, b) => PLFormula::and(support(a), support(b)),
        PLFormula::Or(a, b) => PLFormula::or(support(a), support(b)),
        other => other.clone(),
    }
}

fn support_assignment(s: &PLAssignment) -> PLAssignment {
    let mut out = PLAssignment::new(SemiringId::Boolean);
    for (l, v) in s.iter() {
        out.set(l.clone(), Value::Bool(!v.is_zero())).unwrap();
    }
    out
}

#[test]
fn positivity_makes_support_a_homomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for id in SemiringId::ALL {
        for _ in 0..200 {
            let f = random_positive(&mut rng, id, 4);
            let s = random_assignment(&mut rng, id, &["p", "q", "r"]);
            let k = eval_pl(&f, &s).unwrap();
            let b = eval_pl(&support(&f), &support_assignment(&s)).unwrap();
            assert_eq!(!k.is_zero(), !b.is_zero(), "{id}: {f:?} under {s:?}");
        }
    }
}

fn random_formula(rng: &mut ChaCha8Rng, id: SemiringId, depth: u32) -> PLFormula {
    if depth == 0 || rng.gen_bool(0.3) {
        return random_positive(rng, id, 1);
    }
    let a = random_formula(rng, id, depth - 1);
    let b = random_formula(rng, id, depth - 1);
    match rng.gen_range(0..10) {
        0 => PLFormula::and(a, b),
        1 => PLFormula::or(a, b),
        2 => PLFormula::eq(a, b),
        3 if id.profile().ordered => PLFormula::leq(a, b),
        4 => PLFormula::neq(a, b),
        5 if id.profile().ordered => PLFormula::not_leq(a, b),
        6 => PLFormula::bnot(a),
        7 => PLFormula::band(a, b),
        8 => PLFormula::bor(a, b),
        _ => PLFormula::bimp(a, b),
    }
}

#[test]
fn desugaring_keeps_values() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for id in SemiringId::ALL {
        for _ in 0..200 {
            let f = random_formula(&mut rng, id, 4);
            let s = random_assignment(&mut rng, id, &["p", "q", "r"]);
            let d = desugar_pl(&f, id);
            assert_eq!(eval_pl(&f, &s).unwrap(), eval_pl(&d, &s).unwrap(), "{id}: {f:?}");
        }
    }
}
