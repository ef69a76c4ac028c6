//! Exact arithmetic for the six supported commutative positive semirings.
//!
//! Every [`Value`] belongs to exactly one semiring, given by its variant.
//! Binary operations on values from different semirings are rejected.

mod axioms;
mod literal;
pub mod poly;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use axioms::{axiom_check, AxiomReport, Violation};
pub use literal::parse_value;
pub use poly::{Monomial, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SemiringId {
    Boolean,
    Natural,
    NonnegRational,
    Tropical,
    Lukasiewicz,
    NaturalPolynomial,
}

impl SemiringId {
    pub const ALL: [SemiringId; 6] = [
        SemiringId::Boolean,
        SemiringId::Natural,
        SemiringId::NonnegRational,
        SemiringId::Tropical,
        SemiringId::Lukasiewicz,
        SemiringId::NaturalPolynomial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SemiringId::Boolean => "boolean",
            SemiringId::Natural => "natural",
            SemiringId::NonnegRational => "nonneg-rational",
            SemiringId::Tropical => "tropical",
            SemiringId::Lukasiewicz => "lukasiewicz",
            SemiringId::NaturalPolynomial => "natural-polynomial",
        }
    }

    pub fn zero(self) -> Value {
        match self {
            SemiringId::Boolean => Value::Bool(false),
            SemiringId::Natural => Value::Nat(BigUint::zero()),
            SemiringId::NonnegRational => Value::Rat(BigRational::zero()),
            SemiringId::Tropical => Value::Trop(None),
            SemiringId::Lukasiewicz => Value::Luk(BigRational::zero()),
            SemiringId::NaturalPolynomial => Value::Poly(Polynomial::zero()),
        }
    }

    pub fn one(self) -> Value {
        match self {
            SemiringId::Boolean => Value::Bool(true),
            SemiringId::Natural => Value::Nat(BigUint::one()),
            SemiringId::NonnegRational => Value::Rat(BigRational::one()),
            SemiringId::Tropical => Value::Trop(Some(BigRational::zero())),
            SemiringId::Lukasiewicz => Value::Luk(BigRational::one()),
            SemiringId::NaturalPolynomial => Value::Poly(Polynomial::one()),
        }
    }

    pub fn bool(self, b: bool) -> Value {
        if b {
            self.one()
        } else {
            self.zero()
        }
    }

    pub fn profile(self) -> SemiringProfile {
        SemiringProfile::of(self)
    }

    /// Default finite value universe for bounded searches: zero, one and a
    /// non-idempotent element where the semiring has one.
    pub fn default_universe(self) -> Vec<Value> {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        match self {
            SemiringId::Boolean => vec![self.zero(), self.one()],
            SemiringId::Natural => (0u32..=3).map(Value::nat).collect(),
            SemiringId::NonnegRational => [r(0, 1), r(1, 2), r(1, 1), r(2, 1)]
                .into_iter()
                .map(Value::Rat)
                .collect(),
            SemiringId::Tropical => vec![
                Value::Trop(None),
                Value::Trop(Some(r(0, 1))),
                Value::Trop(Some(r(1, 1))),
                Value::Trop(Some(r(2, 1))),
            ],
            SemiringId::Lukasiewicz => [r(0, 1), r(1, 2), r(1, 1)]
                .into_iter()
                .map(Value::Luk)
                .collect(),
            SemiringId::NaturalPolynomial => vec![
                self.zero(),
                self.one(),
                Value::Poly(Polynomial::var("x")),
            ],
        }
    }
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SemiringId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s.trim() {
            "boolean" | "bool" | "B" => SemiringId::Boolean,
            "natural" | "nat" | "N" => SemiringId::Natural,
            "nonneg-rational" | "rational" | "R>=0" => SemiringId::NonnegRational,
            "tropical" | "T" => SemiringId::Tropical,
            "lukasiewicz" | "L" => SemiringId::Lukasiewicz,
            "natural-polynomial" | "poly" | "N[X]" => SemiringId::NaturalPolynomial,
            other => {
                return Err(Error::InvalidValue(format!("unknown semiring `{other}`")));
            }
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderKind {
    None,
    Numeric,
    ReverseNumeric,
    Coefficientwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiringProfile {
    pub id: SemiringId,
    pub ordered: bool,
    pub order_kind: OrderKind,
    pub positive: bool,
    pub commutative: bool,
}

impl SemiringProfile {
    pub fn of(id: SemiringId) -> Self {
        let order_kind = match id {
            SemiringId::Tropical => OrderKind::ReverseNumeric,
            SemiringId::NaturalPolynomial => OrderKind::Coefficientwise,
            _ => OrderKind::Numeric,
        };
        SemiringProfile {
            id,
            ordered: true,
            order_kind,
            positive: true,
            commutative: true,
        }
    }

    /// The same semiring with its order forgotten.
    pub fn unordered(id: SemiringId) -> Self {
        SemiringProfile {
            ordered: false,
            order_kind: OrderKind::None,
            ..SemiringProfile::of(id)
        }
    }
}

/// One element of one of the supported semirings.
///
/// `Trop(None)` is the tropical ∞ (its zero); `Trop(Some(0))` is its one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Bool(bool),
    Nat(BigUint),
    Rat(BigRational),
    Trop(Option<BigRational>),
    Luk(BigRational),
    Poly(Polynomial),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiringOp {
    Add,
    Mul,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Leq,
}

/// Outcome of an order comparison; `Incomparable` only arises for ℕ[X].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeqOutcome {
    Holds,
    Fails,
    Incomparable,
}

impl LeqOutcome {
    pub fn holds(self) -> bool {
        self == LeqOutcome::Holds
    }
}

impl Value {
    pub fn nat(n: u32) -> Value {
        Value::Nat(BigUint::from(n))
    }

    pub fn rational(n: i64, d: i64) -> Result<Value> {
        Value::new_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn new_rational(r: BigRational) -> Result<Value> {
        if r.is_negative() {
            return Err(Error::InvalidValue(format!("negative rational {r}")));
        }
        Ok(Value::Rat(r))
    }

    pub fn lukasiewicz(n: i64, d: i64) -> Result<Value> {
        Value::new_lukasiewicz(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn new_lukasiewicz(r: BigRational) -> Result<Value> {
        if r.is_negative() || r > BigRational::one() {
            return Err(Error::InvalidValue(format!("Łukasiewicz value {r} outside [0,1]")));
        }
        Ok(Value::Luk(r))
    }

    pub fn tropical(n: i64, d: i64) -> Value {
        Value::Trop(Some(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }

    pub fn tropical_infinity() -> Value {
        Value::Trop(None)
    }

    pub fn id(&self) -> SemiringId {
        match self {
            Value::Bool(_) => SemiringId::Boolean,
            Value::Nat(_) => SemiringId::Natural,
            Value::Rat(_) => SemiringId::NonnegRational,
            Value::Trop(_) => SemiringId::Tropical,
            Value::Luk(_) => SemiringId::Lukasiewicz,
            Value::Poly(_) => SemiringId::NaturalPolynomial,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Bool(b) => !b,
            Value::Nat(n) => n.is_zero(),
            Value::Rat(r) | Value::Luk(r) => r.is_zero(),
            Value::Trop(t) => t.is_none(),
            Value::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Bool(b) => *b,
            Value::Nat(n) => n.is_one(),
            Value::Rat(r) | Value::Luk(r) => r.is_one(),
            Value::Trop(t) => t.as_ref().is_some_and(|r| r.is_zero()),
            Value::Poly(p) => p.is_one(),
        }
    }

    /// Checks that the payload satisfies its semiring's range invariant.
    pub fn check_invariants(&self) -> Result<()> {
        match self {
            Value::Rat(r) if r.is_negative() => {
                Err(Error::InvalidValue(format!("negative rational {r}")))
            }
            Value::Luk(r) if r.is_negative() || *r > BigRational::one() => Err(
                Error::InvalidValue(format!("Łukasiewicz value {r} outside [0,1]")),
            ),
            _ => Ok(()),
        }
    }

    fn same_id(&self, other: &Value) -> Result<()> {
        if self.id() != other.id() {
            return Err(Error::SemiringMismatch {
                left: self.id(),
                right: other.id(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Value) -> Result<Value> {
        combine(SemiringOp::Add, self, other)
    }

    pub fn mul(&self, other: &Value) -> Result<Value> {
        combine(SemiringOp::Mul, self, other)
    }

    pub fn leq(&self, other: &Value) -> Result<LeqOutcome> {
        leq(self, other)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        literal::write_value(self, f)
    }
}

/// Exact semiring sum or product.
pub fn combine(op: SemiringOp, a: &Value, b: &Value) -> Result<Value> {
    a.same_id(b)?;
    let v = match (op, a, b) {
        (SemiringOp::Add, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x || *y),
        (SemiringOp::Mul, Value::Bool(x), Value::Bool(y)) => Value::Bool(*x && *y),
        (SemiringOp::Add, Value::Nat(x), Value::Nat(y)) => Value::Nat(x + y),
        (SemiringOp::Mul, Value::Nat(x), Value::Nat(y)) => Value::Nat(x * y),
        (SemiringOp::Add, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
        (SemiringOp::Mul, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
        (SemiringOp::Add, Value::Trop(x), Value::Trop(y)) => Value::Trop(match (x, y) {
            (None, t) | (t, None) => t.clone(),
            (Some(p), Some(q)) => Some(p.min(q).clone()),
        }),
        (SemiringOp::Mul, Value::Trop(x), Value::Trop(y)) => Value::Trop(match (x, y) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        }),
        (SemiringOp::Add, Value::Luk(x), Value::Luk(y)) => Value::Luk(x.max(y).clone()),
        (SemiringOp::Mul, Value::Luk(x), Value::Luk(y)) => Value::Luk(x * y),
        (SemiringOp::Add, Value::Poly(x), Value::Poly(y)) => Value::Poly(x.add(y)),
        (SemiringOp::Mul, Value::Poly(x), Value::Poly(y)) => Value::Poly(x.mul(y)),
        _ => unreachable!("ids checked above"),
    };
    Ok(v)
}

fn leq(a: &Value, b: &Value) -> Result<LeqOutcome> {
    a.same_id(b)?;
    let holds = |h: bool| if h { LeqOutcome::Holds } else { LeqOutcome::Fails };
    let out = match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => holds(x <= y),
        (Value::Nat(x), Value::Nat(y)) => holds(x <= y),
        (Value::Rat(x), Value::Rat(y)) | (Value::Luk(x), Value::Luk(y)) => holds(x <= y),
        // reverse numeric with ∞ as the least element
        (Value::Trop(x), Value::Trop(y)) => holds(match (x, y) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(p), Some(q)) => p >= q,
        }),
        (Value::Poly(x), Value::Poly(y)) => {
            if x.coefficientwise_leq(y) {
                LeqOutcome::Holds
            } else if y.coefficientwise_leq(x) {
                LeqOutcome::Fails
            } else {
                LeqOutcome::Incomparable
            }
        }
        _ => unreachable!("ids checked above"),
    };
    Ok(out)
}

/// Decides `a = b` or `a ≤ b` in the declared order of `profile`.
pub fn compare(
    profile: &SemiringProfile,
    rel: Relation,
    a: &Value,
    b: &Value,
) -> Result<LeqOutcome> {
    a.same_id(b)?;
    match rel {
        Relation::Eq => Ok(if a == b {
            LeqOutcome::Holds
        } else {
            LeqOutcome::Fails
        }),
        Relation::Leq => {
            if !profile.ordered {
                return Err(Error::Unordered(profile.id));
            }
            leq(a, b)
        }
    }
}

/// The natural order a ≤ₙ b (∃c. a + c = b). For all six instances it
/// coincides with the declared order, so it is decided through it.
pub fn natural_leq(a: &Value, b: &Value) -> Result<bool> {
    Ok(leq(a, b)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_examples() {
        assert_eq!(Value::nat(0).add(&Value::nat(7)).unwrap(), Value::nat(7));
        assert_eq!(
            Value::tropical(2, 1).mul(&Value::tropical(3, 1)).unwrap(),
            Value::tropical(5, 1)
        );
        let half = Value::lukasiewicz(1, 2).unwrap();
        let seven = Value::lukasiewicz(7, 10).unwrap();
        assert_eq!(half.add(&seven).unwrap(), seven);
    }

    #[test]
    fn mismatched_ids_are_rejected() {
        let err = Value::nat(1).add(&Value::Bool(true)).unwrap_err();
        assert!(matches!(err, Error::SemiringMismatch { .. }));
    }

    #[test]
    fn compare_examples() {
        let p = SemiringProfile::of(SemiringId::Natural);
        assert!(compare(&p, Relation::Leq, &Value::nat(2), &Value::nat(5))
            .unwrap()
            .holds());
        let t = SemiringProfile::of(SemiringId::Tropical);
        assert!(compare(
            &t,
            Relation::Leq,
            &Value::tropical_infinity(),
            &Value::tropical(0, 1)
        )
        .unwrap()
        .holds());
        let r = SemiringProfile::of(SemiringId::NonnegRational);
        assert!(compare(
            &r,
            Relation::Eq,
            &Value::rational(1, 3).unwrap(),
            &Value::rational(2, 6).unwrap()
        )
        .unwrap()
        .holds());
    }

    #[test]
    fn leq_on_unordered_profile_is_an_error() {
        let p = SemiringProfile::unordered(SemiringId::Natural);
        assert_eq!(
            compare(&p, Relation::Leq, &Value::nat(1), &Value::nat(2)),
            Err(Error::Unordered(SemiringId::Natural))
        );
    }

    #[test]
    fn polynomial_incomparable() {
        let x = Value::Poly(Polynomial::var("x"));
        let y = Value::Poly(Polynomial::var("y"));
        assert_eq!(x.leq(&y).unwrap(), LeqOutcome::Incomparable);
    }

    #[test]
    fn range_invariants() {
        assert!(Value::rational(-1, 2).is_err());
        assert!(Value::lukasiewicz(3, 2).is_err());
        assert!(Value::lukasiewicz(1, 1).is_ok());
    }

    #[test]
    fn tropical_identities() {
        let t = SemiringId::Tropical;
        let five = Value::tropical(5, 1);
        assert_eq!(t.zero().add(&five).unwrap(), five);
        assert_eq!(t.one().mul(&five).unwrap(), five);
        assert_eq!(t.zero().mul(&five).unwrap(), t.zero());
    }
}
