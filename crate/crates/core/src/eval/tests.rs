use super::*;
use crate::logic::{Literal, Vocabulary};
use crate::semiring::SemiringId;

fn n(v: u32) -> Value {
    Value::nat(v)
}

fn example(swap: bool) -> PLFormula {
    let p = PLFormula::prop;
    let (l, r) = (
        PLFormula::or(p("p"), p("q")),
        PLFormula::and(p("p"), p("q")),
    );
    let cmp = if swap {
        PLFormula::leq(r, l)
    } else {
        PLFormula::leq(l, r)
    };
    PLFormula::and(
        PLFormula::and(cmp, PLFormula::leq(PLFormula::Const(n(3)), p("p"))),
        PLFormula::leq(PLFormula::Const(n(3)), p("q")),
    )
}

fn threes() -> PLAssignment {
    PLAssignment::new(SemiringId::Natural)
        .with(Literal::pos("p"), n(3))
        .and_then(|s| s.with(Literal::pos("q"), n(3)))
        .and_then(|s| s.with(Literal::neg("p"), n(0)))
        .and_then(|s| s.with(Literal::neg("q"), n(0)))
        .unwrap()
}

#[test]
fn pl_example_values() {
    assert_eq!(eval_pl(&example(false), &threes()).unwrap(), n(1));
    assert_eq!(eval_pl(&example(true), &threes()).unwrap(), n(0));
    assert_eq!(eval_pl(&PLFormula::Const(n(7)), &threes()).unwrap(), n(7));
}

#[test]
fn pl_missing_literal() {
    let s = PLAssignment::new(SemiringId::Natural)
        .with(Literal::pos("p"), n(1))
        .unwrap();
    let f = PLFormula::and(PLFormula::prop("p"), PLFormula::neg_prop("p"));
    assert!(matches!(eval_pl(&f, &s), Err(Error::MissingLiteral(_))));
}

#[test]
fn pl_sugar_is_boolean() {
    let f = PLFormula::bimp(PLFormula::prop("p"), PLFormula::prop("q"));
    let s = PLAssignment::model_defining(
        SemiringId::Natural,
        [("p".to_string(), n(0)), ("q".to_string(), n(0))],
    )
    .unwrap();
    assert_eq!(eval_pl(&f, &s).unwrap(), n(1));
    let g = PLFormula::bnot(PLFormula::prop("p"));
    assert_eq!(eval_pl(&g, &s).unwrap(), n(1));
}

fn unary(values: &[u32]) -> KInterpretation {
    let vocab: Vocabulary = [("R".to_string(), 1)].into();
    let mut pi = KInterpretation::new(SemiringId::Natural, values.len(), &vocab);
    for (i, v) in values.iter().enumerate() {
        pi.set("R", &[i], false, n(*v)).unwrap();
    }
    pi
}

#[test]
fn fo_sum_and_product() {
    let pi = unary(&[2, 3]);
    let s = FOAssignment::new();
    let ex = FOFormula::exists("x", FOFormula::atom("R", &["x"]));
    let fa = FOFormula::forall("x", FOFormula::atom("R", &["x"]));
    assert_eq!(eval_fo(&ex, &pi, &s).unwrap(), n(5));
    assert_eq!(eval_fo(&fa, &pi, &s).unwrap(), n(6));
}

#[test]
fn fo_reflexive_equality_and_unassigned() {
    let pi = unary(&[1, 1]);
    let f = FOFormula::var_eq("x", "x");
    assert_eq!(eval_fo(&f, &pi, &FOAssignment::new().update("x", 1)).unwrap(), n(1));
    assert!(matches!(
        eval_fo(&f, &pi, &FOAssignment::new()),
        Err(Error::UnassignedVariable(_))
    ));
}

#[test]
fn fo_order_relation() {
    let pi = KInterpretation::ordered(SemiringId::Natural, 3, &Vocabulary::new());
    let f = FOFormula::atom(crate::logic::ORDER_REL, &["x", "y"]);
    let s = |a, b| FOAssignment::new().update("x", a).update("y", b);
    assert_eq!(eval_fo(&f, &pi, &s(0, 2)).unwrap(), n(1));
    assert_eq!(eval_fo(&f, &pi, &s(2, 0)).unwrap(), n(0));
}

#[test]
fn fo_shadowing_restores_outer_binding() {
    // ∃x (R(x) ∧ ∃x R(x)) ∧ ... exercises slot reuse
    let pi = unary(&[2, 3]);
    let inner = FOFormula::exists("x", FOFormula::atom("R", &["x"]));
    let f = FOFormula::exists("x", FOFormula::and(inner, FOFormula::atom("R", &["x"])));
    // Σ_a 5·R(a) = 25
    assert_eq!(eval_fo(&f, &pi, &FOAssignment::new()).unwrap(), n(25));
}

#[test]
fn eso_trivial_exists() {
    let phi = ESOSentence {
        prefix: vec![("P".into(), 1)],
        matrix: FOFormula::exists("x", FOFormula::atom("P", &["x"])),
    };
    let pi = KInterpretation::new(SemiringId::Natural, 1, &Vocabulary::new());
    let mode = EsoMode::exhaustive(vec![n(0), n(1)], 1 << 20);
    assert_eq!(eval_eso(&phi, &pi, &mode).unwrap(), n(1));
}

#[test]
fn eso_cap_is_reported() {
    let phi = ESOSentence {
        prefix: vec![("P".into(), 2)],
        matrix: FOFormula::Const(n(0)),
    };
    let pi = KInterpretation::new(SemiringId::Natural, 3, &Vocabulary::new());
    let mode = EsoMode::exhaustive(vec![n(0), n(1)], 100);
    assert!(matches!(
        eval_eso(&phi, &pi, &mode),
        Err(Error::BoundExceeded { needed: 262144, cap: 100 })
    ));
}

fn feas4(id: SemiringId) -> ESOSentence {
    let vars = ["y1", "y2", "y3", "y4"];
    let mut sum = FOFormula::atom("R0", &[]);
    for k in 1..=4 {
        let ys = &vars[..k];
        let mut body = FOFormula::atom(&format!("R{k}"), ys);
        for y in ys {
            body = FOFormula::and(body, FOFormula::atom("Z", &[y]));
        }
        sum = FOFormula::or(sum, FOFormula::exists_all(ys, body));
    }
    ESOSentence {
        prefix: vec![("Z".into(), 1)],
        matrix: FOFormula::eq(FOFormula::Const(id.zero()), sum),
    }
}

fn feas4_interp(id: SemiringId, dom: usize) -> KInterpretation {
    let vocab: Vocabulary = (0..=4).map(|k| (format!("R{k}"), k)).collect();
    KInterpretation::new(id, dom, &vocab)
}

#[test]
fn feas4_product_has_a_zero() {
    let id = SemiringId::NonnegRational;
    let mut pi = feas4_interp(id, 2);
    pi.set("R2", &[0, 1], false, id.one()).unwrap();
    let mut z = KInterpretation::new(id, 2, &Vocabulary::new());
    z.add_relation("Z", 1);
    assert_eq!(eval_eso(&feas4(id), &pi, &EsoMode::Witness(z)).unwrap(), id.one());
}

#[test]
fn feas4_constant_has_no_zero() {
    let id = SemiringId::NonnegRational;
    let mut pi = feas4_interp(id, 2);
    pi.set("R0", &[], false, id.one()).unwrap();
    let universe: Vec<Value> = [(0, 1), (1, 2), (1, 1)]
        .iter()
        .map(|&(a, b)| Value::rational(a, b).unwrap())
        .collect();
    let mode = EsoMode::exhaustive(universe, 1 << 20);
    assert_eq!(eval_eso(&feas4(id), &pi, &mode).unwrap(), id.zero());
}

#[test]
fn zero_ary_quantifier_ranges_over_elements() {
    // ∃R0 (R0() = #2): true exactly when 2 is in the universe
    let id = SemiringId::Natural;
    let phi = ESOSentence {
        prefix: vec![("C".into(), 0)],
        matrix: FOFormula::eq(FOFormula::atom("C", &[]), FOFormula::Const(n(2))),
    };
    let pi = KInterpretation::new(id, 1, &Vocabulary::new());
    let with = EsoMode::exhaustive(vec![n(0), n(1), n(2)], 1000);
    let without = EsoMode::exhaustive(vec![n(0), n(1)], 1000);
    assert_eq!(eval_eso(&phi, &pi, &with).unwrap(), n(1));
    assert_eq!(eval_eso(&phi, &pi, &without).unwrap(), n(0));
}

#[test]
fn witness_must_match_prefix() {
    let phi = ESOSentence {
        prefix: vec![("P".into(), 1)],
        matrix: FOFormula::Const(n(1)),
    };
    let pi = KInterpretation::new(SemiringId::Natural, 1, &Vocabulary::new());
    let mut ext = KInterpretation::new(SemiringId::Natural, 1, &Vocabulary::new());
    ext.add_relation("Q", 1);
    assert!(eval_eso(&phi, &pi, &EsoMode::Witness(ext)).is_err());
}
