use super::*;
use crate::machine::{decide_nondet, run_guess, NondetOutcome};
use crate::solvers::{sat_bruteforce, SatOutcome, SearchBudget};

const NAT: SemiringId = SemiringId::Natural;

fn n(v: u32) -> Value {
    Value::nat(v)
}

fn budget(hi: u32) -> SearchBudget {
    SearchBudget::new((0..=hi).map(n).collect(), 5_000_000).unwrap()
}

/// Accepts iff the guess g₁ (cell 2) equals x₁.
fn eq_guess() -> Machine {
    Machine::new(
        "eq_guess",
        NAT,
        vec![
            Node::Input { next: 2 },
            Node::Branch {
                rel: BranchRel::Eq,
                neg: 3,
                pos: 4,
            },
            Node::Compute {
                target: 1,
                op: Op::Const(n(1)),
                next: 5,
            },
            Node::Compute {
                target: 1,
                op: Op::Const(n(0)),
                next: 5,
            },
            Node::Compute {
                target: -2,
                op: Op::Const(n(0)),
                next: 6,
            },
            Node::Output,
        ],
    )
    .unwrap()
}

/// Accepts iff x₁ ≠ 0, without looking at any guess.
fn identity() -> Machine {
    Machine::new("id", NAT, vec![Node::Input { next: 2 }, Node::Output]).unwrap()
}

fn conjuncts(f: &PLFormula) -> Vec<&PLFormula> {
    match f {
        PLFormula::BAnd(a, b) => {
            let mut v = conjuncts(a);
            v.extend(conjuncts(b));
            v
        }
        _ => vec![f],
    }
}

#[test]
fn proposition_count() {
    for steps in 2..6 {
        let art = cook_compile(&eq_guess(), &[n(2)], steps).unwrap();
        let t = steps;
        assert_eq!(art.window, t as i64);
        let want = (t + 1) * (2 * t + 1) + (t + 1) * 6;
        assert_eq!(art.formula.propositions().len(), want);
        assert_eq!(art.prop_v.len() + art.prop_q.len(), want);
        for p in art.formula.propositions() {
            assert!(art.prop_v.values().chain(art.prop_q.values()).any(|q| *q == p));
        }
    }
}

#[test]
fn window_grows_with_far_indices() {
    let m = Machine::new(
        "far",
        NAT,
        vec![
            Node::Input { next: 2 },
            Node::Compute {
                target: 5,
                op: Op::Const(n(1)),
                next: 3,
            },
            Node::Output,
        ],
    )
    .unwrap();
    assert_eq!(cook_compile(&m, &[n(1)], 4).unwrap().window, 7);
    assert_eq!(cook_compile(&m, &[n(1)], 1).unwrap().window, 5);
}

#[test]
fn start_node_is_pinned() {
    let art = cook_compile(&eq_guess(), &[n(2)], 6).unwrap();
    let want = PLFormula::eq(PLFormula::prop("q0_1"), PLFormula::Const(n(1)));
    assert!(conjuncts(&art.formula).contains(&&want));
}

#[test]
fn eq_guess_decodes_its_guess() {
    let art = cook_compile(&eq_guess(), &[n(2)], 6).unwrap();
    let s = sat_bruteforce(&art.formula, &budget(2)).unwrap();
    let s = s.assignment().expect("satisfiable");
    let g = cook_decode_guess(&art, s).unwrap();
    assert_eq!(g, vec![n(2)]);
    assert!(run_guess(&eq_guess(), &[n(2)], &g, 6, false).unwrap().accepted());
    let nondet = decide_nondet(&eq_guess(), &[n(2)], &budget(2).universe, 4, 6).unwrap();
    assert_eq!(nondet, NondetOutcome::Accepted { guess: vec![n(2)] });
}

#[test]
fn eq_guess_needs_the_value_in_the_universe() {
    let art = cook_compile(&eq_guess(), &[n(3)], 6).unwrap();
    assert_eq!(sat_bruteforce(&art.formula, &budget(2)).unwrap(), SatOutcome::NoneWithinBounds);
    // x₁ = 0 is matched by the empty guess or by g₁ = 0
    let art = cook_compile(&eq_guess(), &[n(0)], 4).unwrap();
    let s = sat_bruteforce(&art.formula, &budget(2)).unwrap();
    let g = cook_decode_guess(&art, s.assignment().unwrap()).unwrap();
    assert!(g.first().is_none_or(Value::is_zero));
    assert!(run_guess(&eq_guess(), &[n(0)], &g, 4, false).unwrap().accepted());
}

#[test]
fn empty_guess_for_a_guess_free_machine() {
    let art = cook_compile(&identity(), &[n(3), n(0)], 5).unwrap();
    let s = sat_bruteforce(&art.formula, &budget(3)).unwrap();
    let g = cook_decode_guess(&art, s.assignment().unwrap()).unwrap();
    assert!(g.is_empty());
    let art = cook_compile(&identity(), &[n(0), n(3)], 5).unwrap();
    assert_eq!(sat_bruteforce(&art.formula, &budget(3)).unwrap(), SatOutcome::NoneWithinBounds);
}

#[test]
fn inconsistent_assignment_is_rejected() {
    let art = cook_compile(&eq_guess(), &[n(2)], 6).unwrap();
    let s = sat_bruteforce(&art.formula, &budget(2)).unwrap();
    let mut s = s.assignment().unwrap().clone();
    // a marker of 2 breaks the unary block
    s.set(Literal::pos(&v_name(0, -3)), n(2)).unwrap();
    assert!(matches!(cook_decode_guess(&art, &s), Err(Error::Contract(_))));
}

#[test]
fn precondition_and_semiring_checks() {
    assert!(matches!(
        cook_compile(&identity(), &[n(1), n(1)], 1),
        Err(Error::Contract(_))
    ));
    assert!(matches!(
        cook_compile(&identity(), &[Value::Bool(true)], 3),
        Err(Error::SemiringMismatch { .. })
    ));
}

#[test]
fn size_is_polynomial() {
    let m = eq_guess();
    for steps in [2usize, 4, 8] {
        let size = cook_compile(&m, &[n(1)], steps).unwrap().formula.size();
        let bound = 200 * m.len() * m.len() * (steps + 1) * (steps + 2);
        assert!(size <= bound, "size {size} > {bound} at T = {steps}");
    }
}
