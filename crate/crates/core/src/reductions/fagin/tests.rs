use super::*;
use crate::eval::{eval_eso, EsoMode};
use crate::machine::{run, run_guess};

const NAT: SemiringId = SemiringId::Natural;

fn n(v: u32) -> Value {
    Value::nat(v)
}

fn pass_through() -> Machine {
    Machine::new("pass", NAT, vec![Node::Input { next: 2 }, Node::Output]).unwrap()
}

/// Accepts iff x₁ = x₂, and clears cell −2 on the way.
fn equal_pair() -> Machine {
    Machine::new(
        "equal_pair",
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

fn witness(m: &Machine, z: usize, x: &[Value], guess: &[Value]) -> (KInterpretation, KInterpretation) {
    let pi = fagin_input(NAT, x).unwrap();
    let r = run_guess(m, x, guess, 100, true).unwrap();
    assert!(r.accepted());
    let ext = fagin_witness_from_trace(m, z, &pi, r.trace.as_ref().unwrap(), guess).unwrap();
    (pi, ext)
}

#[test]
fn prefix_arities() {
    let art = fagin_compile(&equal_pair(), 2).unwrap();
    let prefix = &art.sentence.prefix;
    assert_eq!(prefix[0], (TAPE_REL.to_string(), 5));
    assert_eq!(prefix.len(), 7);
    assert!(prefix[1..].iter().all(|(_, k)| *k == 2));
    assert_eq!(prefix[6].0, node_rel(6));
}

#[test]
fn small_z_is_a_compile_error() {
    assert!(matches!(fagin_compile(&equal_pair(), 1), Err(Error::Compile(_))));
    assert!(matches!(fagin_compile(&pass_through(), 0), Err(Error::Compile(_))));
    assert!(fagin_compile(&pass_through(), 1).is_ok());
}

#[test]
fn input_structure() {
    let pi = fagin_input(NAT, &[n(2), n(0), n(5)]).unwrap();
    assert_eq!(pi.domain, 3);
    assert_eq!(pi.get(INPUT_REL, &[2], false).unwrap(), &n(5));
    assert_eq!(pi.get(INPUT_REL, &[1], true).unwrap(), &n(1));
    assert!(fagin_input(NAT, &[n(1)]).is_err());
}

#[test]
fn accepting_run_is_a_witness() {
    let m = equal_pair();
    let art = fagin_compile(&m, 2).unwrap();
    let (pi, ext) = witness(&m, 2, &[n(2), n(2), n(0)], &[]);
    assert_eq!(eval_eso(&art.sentence, &pi, &EsoMode::Witness(ext)).unwrap(), n(1));
}

#[test]
fn guess_layout_matches_the_sentence() {
    let m = equal_pair();
    let art = fagin_compile(&m, 2).unwrap();
    let (pi, ext) = witness(&m, 2, &[n(1), n(1), n(3)], &[n(1), n(4)]);
    // step 0: guess in cells 4, 5 with markers at −5, −6
    let t0 = [0, 0];
    let fact = |d: usize, mag: [usize; 2]| {
        let mut args = t0.to_vec();
        args.push(d);
        args.extend(mag);
        ext.get(TAPE_REL, &args, false).unwrap().clone()
    };
    assert_eq!(fact(1, [1, 1]), n(1));
    assert_eq!(fact(1, [1, 2]), n(4));
    assert_eq!(fact(0, [1, 2]), n(1));
    assert_eq!(fact(0, [2, 0]), n(1));
    assert_eq!(fact(0, [2, 1]), n(0));
    assert_eq!(eval_eso(&art.sentence, &pi, &EsoMode::Witness(ext)).unwrap(), n(1));
}

#[test]
fn perturbed_witness_fails() {
    let m = equal_pair();
    let art = fagin_compile(&m, 2).unwrap();
    let (pi, mut ext) = witness(&m, 2, &[n(2), n(2), n(0)], &[]);
    // cell 1 at the last time step
    ext.set_model_defining(TAPE_REL, &[2, 2, 1, 0, 1], n(0)).unwrap();
    assert_eq!(eval_eso(&art.sentence, &pi, &EsoMode::Witness(ext.clone())).unwrap(), n(0));
    ext.set_model_defining(TAPE_REL, &[2, 2, 1, 0, 1], n(1)).unwrap();
    // node at time 1 moved away from the branch
    ext.set_model_defining(&node_rel(2), &[0, 1], n(0)).unwrap();
    ext.set_model_defining(&node_rel(3), &[0, 1], n(1)).unwrap();
    assert_eq!(eval_eso(&art.sentence, &pi, &EsoMode::Witness(ext)).unwrap(), n(0));
}

#[test]
fn halted_machine_stays_frozen() {
    let m = pass_through();
    let (_, ext) = witness(&m, 2, &[n(3), n(0)], &[]);
    for t in 1..4 {
        let tt = digits(t, 2, 2);
        assert_eq!(ext.get(&node_rel(2), &tt, false).unwrap(), &n(1));
        assert_eq!(ext.get(&node_rel(1), &tt, false).unwrap(), &n(0));
    }
    assert_eq!(ext.get(&node_rel(1), &[0, 0], false).unwrap(), &n(1));
}

#[test]
fn witness_contracts() {
    let m = equal_pair();
    let pi = fagin_input(NAT, &[n(1), n(2)]).unwrap();
    let r = run(&m, &[n(1), n(2)], 100, true).unwrap();
    let trace = r.trace.unwrap();
    // rejecting run
    assert!(matches!(
        fagin_witness_from_trace(&m, 2, &pi, &trace, &[]),
        Err(Error::Contract(_))
    ));
    // four steps do not fit into 2¹ − 1
    let pi = fagin_input(NAT, &[n(1), n(1)]).unwrap();
    let r = run(&m, &[n(1), n(1)], 100, true).unwrap();
    assert!(matches!(
        fagin_witness_from_trace(&m, 1, &pi, r.trace.as_ref().unwrap(), &[]),
        Err(Error::Contract(_))
    ));
    // a guess that runs off the truncated tape
    assert!(matches!(
        fagin_witness_from_trace(&m, 2, &pi, r.trace.as_ref().unwrap(), &[n(0)]),
        Err(Error::Contract(_))
    ));
}

#[test]
fn exhaustive_search_decides_the_smallest_case() {
    let m = pass_through();
    let art = fagin_compile(&m, 1).unwrap();
    let universe = vec![n(0), n(1)];
    for a in 0..2 {
        for b in 0..2 {
            let x = [n(a), n(b)];
            let pi = fagin_input(NAT, &x).unwrap();
            let mode = EsoMode::model_defining(universe.clone(), 1 << 20);
            let got = eval_eso(&art.sentence, &pi, &mode).unwrap();
            let want = run(&m, &x, 10, false).unwrap().accepted();
            assert_eq!(!got.is_zero(), want, "x = {x:?}");
        }
    }
}
