mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scl_core::error::Error;
use scl_core::eval::{eval_eso, EsoMode};
use scl_core::logic::PLFormula;
use scl_core::machine::{decide_nondet, run, run_guess, Machine, NondetOutcome};
use scl_core::reductions::{
    cook_compile, cook_decode_guess, fagin_compile, fagin_input, fagin_witness_from_trace,
    flatten, is_flat, sat_to_etk,
};
use scl_core::semiring::{SemiringId, Value};
use scl_core::solvers::{etk_bounded, sat_bruteforce, EtkOutcome, SearchBudget};

/// Outcome of one Cook instance: (accepted, decoded guess).
fn cook_instance(m: &Machine, x: &[Value], steps: usize) -> (bool, bool) {
    let id = m.semiring;
    let universe = small_universe(id);
    let budget = SearchBudget::new(universe.clone(), 200_000_000).unwrap();
    let art = cook_compile(m, x, steps).unwrap();
    let sat = sat_bruteforce(&art.formula, &budget).unwrap();
    let max_len = steps.saturating_sub(x.len() + 1);
    let nondet = decide_nondet(m, x, &universe, max_len, steps as u64).unwrap();
    let accepted = matches!(nondet, NondetOutcome::Accepted { .. });
    assert_eq!(sat.assignment().is_some(), accepted, "{m:?} on {x:?}, T = {steps}");
    if let Some(s) = sat.assignment() {
        let g = cook_decode_guess(&art, s).unwrap();
        assert!(g.len() <= max_len);
        let r = run_guess(m, x, &g, steps as u64, false).unwrap();
        assert!(r.accepted(), "decoded guess {g:?} rejected: {m:?} on {x:?}");
    }
    (accepted, sat.assignment().is_some())
}

fn cook_sample(rng: &mut ChaCha8Rng, id: SemiringId) -> Option<(Machine, Vec<Value>, usize)> {
    let universe = small_universe(id);
    let shape = Shape {
        nodes: 2..=8,
        reach: 2,
        consts: universe.clone(),
        arithmetic: true,
        branches: true,
    };
    let m = random_machine(rng, id, &shape);
    let len = rng.gen_range(0..=3);
    let x = random_input(rng, &universe, len);
    let steps = rng.gen_range(x.len().max(1)..=8.min(x.len() + 5));
    let max_len = steps.saturating_sub(x.len() + 1);
    stays_in(&m, &x, &universe, max_len, steps as u64).then_some((m, x, steps))
}

#[test]
fn cook_agrees_with_nondeterministic_decision() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for id in [SemiringId::Boolean, SemiringId::Natural] {
        let (mut done, mut accepted) = (0, 0);
        while done < 60 {
            let Some((m, x, steps)) = cook_sample(&mut rng, id) else {
                continue;
            };
            accepted += cook_instance(&m, &x, steps).0 as usize;
            done += 1;
        }
        assert!(accepted > 5, "only {accepted} accepting instances over {id}");
    }
}

#[test]
fn fagin_witnesses_from_accepting_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let universe = small_universe(NAT);
    let shape = Shape {
        nodes: 2..=6,
        reach: 3,
        consts: universe.clone(),
        arithmetic: true,
        branches: true,
    };
    let (z, reach) = (2, 8);
    let mut done = 0;
    while done < 12 {
        let m = random_machine(&mut rng, NAT, &shape);
        let x = random_input(&mut rng, &universe, 3);
        let len = rng.gen_range(0..=3);
        let g = random_input(&mut rng, &universe, len);
        let r = run_guess(&m, &x, &g, reach, true).unwrap();
        if !r.accepted() {
            continue;
        }
        let pi = fagin_input(NAT, &x).unwrap();
        let art = fagin_compile(&m, z).unwrap();
        let ext = match fagin_witness_from_trace(&m, z, &pi, r.trace.as_ref().unwrap(), &g) {
            Ok(ext) => ext,
            // the run read a cell the truncated tape cannot hold
            Err(Error::Contract(_)) => continue,
            Err(e) => panic!("{e}"),
        };
        let v = eval_eso(&art.sentence, &pi, &EsoMode::Witness(ext)).unwrap();
        assert_eq!(v, n(1), "{m:?} on {x:?} with {g:?}");
        done += 1;
    }
}

#[test]
fn fagin_exhaustive_matches_runs_at_micro_scale() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut seen = [0usize; 2];
    for k in 0..30 {
        let id = if k % 2 == 0 { SemiringId::Boolean } else { NAT };
        let m = micro_machine(&mut rng, id);
        let art = fagin_compile(&m, 1).unwrap();
        let x = random_input(&mut rng, &[id.zero(), id.one()], 2);
        let pi = fagin_input(id, &x).unwrap();
        let mode = EsoMode::model_defining(vec![id.zero(), id.one()], 1 << 22);
        let got = !eval_eso(&art.sentence, &pi, &mode).unwrap().is_zero();
        // two time steps: only the input step can run before halting
        let want = run(&m, &x, 1, false).unwrap().accepted();
        assert_eq!(got, want, "{m:?} on {x:?}");
        seen[want as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

fn satisfiable(f: &PLFormula, budget: &SearchBudget) -> bool {
    sat_bruteforce(f, budget).unwrap().assignment().is_some()
}

#[test]
fn flatten_then_etk_preserves_satisfiability() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let consts: Vec<Value> = (0..4).map(Value::nat).collect();
    let budget = SearchBudget::new(consts.clone(), 50_000_000).unwrap();
    let mut sat_count = 0;
    for _ in 0..150 {
        let f = random_sugar(&mut rng, 3, &["p", "q", "r", "s"]);
        let flat = flatten(&f, NAT).unwrap();
        assert!(is_flat(&flat));
        let before = satisfiable(&f, &budget);
        assert_eq!(before, satisfiable(&flat, &budget), "{f:?}");
        let art = sat_to_etk(&flat, &consts, NAT).unwrap();
        let etk = matches!(etk_bounded(&art.sentence, &budget).unwrap(), EtkOutcome::True(_));
        assert_eq!(before, etk, "{f:?}");
        sat_count += before as usize;
    }
    assert!(sat_count > 20 && sat_count < 140, "{sat_count}");
}
