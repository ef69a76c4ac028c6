//! Exhaustive axiom checking over a finite sample of values.

use super::{SemiringId, SemiringProfile, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub witnesses: Vec<Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub id: SemiringId,
    pub positive: bool,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every semiring, positivity and order law over all tuples drawn
/// from `sample` (plus 0 and 1). Values of another semiring are reported
/// as `foreign-value` violations.
pub fn axiom_check(id: SemiringId, sample: &[Value]) -> AxiomReport {
    let profile = SemiringProfile::of(id);
    let zero = id.zero();
    let one = id.one();
    let mut violations = Vec::new();
    let mut push = |law: &'static str, ws: &[&Value]| {
        violations.push(Violation {
            law,
            witnesses: ws.iter().map(|v| (*v).clone()).collect(),
        })
    };

    let mut values: Vec<Value> = Vec::new();
    for v in sample.iter().chain([&zero, &one]) {
        if v.id() != id {
            push("foreign-value", &[v]);
            continue;
        }
        if v.check_invariants().is_err() {
            push("range", &[v]);
            continue;
        }
        if !values.contains(v) {
            values.push(v.clone());
        }
    }

    // The sample is homogeneous now, so arithmetic cannot fail.
    let add = |a: &Value, b: &Value| a.add(b).expect("homogeneous sample");
    let mul = |a: &Value, b: &Value| a.mul(b).expect("homogeneous sample");
    let leq = |a: &Value, b: &Value| a.leq(b).expect("homogeneous sample").holds();

    if profile.ordered && !leq(&zero, &one) {
        push("order-zero-le-one", &[&zero, &one]);
    }

    for a in &values {
        if add(a, &zero) != *a || add(&zero, a) != *a {
            push("additive-identity", &[a]);
        }
        if mul(a, &one) != *a || mul(&one, a) != *a {
            push("multiplicative-identity", &[a]);
        }
        if !mul(a, &zero).is_zero() || !mul(&zero, a).is_zero() {
            push("annihilation", &[a]);
        }
        if profile.ordered && !leq(a, a) {
            push("order-reflexive", &[a]);
        }
        for b in &values {
            let ab = add(a, b);
            let pb = mul(a, b);
            if ab != add(b, a) {
                push("additive-commutativity", &[a, b]);
            }
            if profile.commutative && pb != mul(b, a) {
                push("multiplicative-commutativity", &[a, b]);
            }
            if profile.positive {
                if pb.is_zero() && !a.is_zero() && !b.is_zero() {
                    push("positivity-zero-divisor", &[a, b]);
                }
                if ab.is_zero() && !(a.is_zero() && b.is_zero()) {
                    push("positivity-sum", &[a, b]);
                }
            }
            if profile.ordered && a != b && leq(a, b) && leq(b, a) {
                push("order-antisymmetric", &[a, b]);
            }
            for c in &values {
                if add(&ab, c) != add(a, &add(b, c)) {
                    push("additive-associativity", &[a, b, c]);
                }
                if mul(&pb, c) != mul(a, &mul(b, c)) {
                    push("multiplicative-associativity", &[a, b, c]);
                }
                if mul(a, &add(b, c)) != add(&pb, &mul(a, c)) {
                    push("left-distributivity", &[a, b, c]);
                }
                if mul(&add(b, c), a) != add(&mul(b, a), &mul(c, a)) {
                    push("right-distributivity", &[a, b, c]);
                }
                if profile.ordered {
                    if leq(a, b) && leq(b, c) && !leq(a, c) {
                        push("order-transitive", &[a, b, c]);
                    }
                    if leq(a, b) && !leq(&add(a, c), &add(b, c)) {
                        push("order-additive-monotone", &[a, b, c]);
                    }
                    if leq(a, b)
                        && leq(&zero, c)
                        && !(leq(&mul(a, c), &mul(b, c)) && leq(&mul(c, a), &mul(c, b)))
                    {
                        push("order-multiplicative-monotone", &[a, b, c]);
                    }
                }
            }
        }
    }

    AxiomReport {
        id,
        positive: profile.positive,
        violations,
    }
}
