//! Value literal syntax: `#t`/`#f`, `#3`, `#3/4`, `#inf`, `#poly{2*x^2*y + 1}`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{parse_polynomial, Polynomial};
use super::{SemiringId, Value};
use crate::error::{Error, Result};

fn bad(text: &str, reason: impl Into<String>) -> Error {
    Error::InvalidLiteral {
        text: text.to_string(),
        reason: reason.into(),
    }
}

fn parse_rational(text: &str, body: &str) -> Result<BigRational> {
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, d),
        None => (body, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad(text, "bad numerator"))?;
    let den: BigInt = den.parse().map_err(|_| bad(text, "bad denominator"))?;
    if den.is_zero() {
        return Err(bad(text, "zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Parses a value literal in the context of semiring `id`.
pub fn parse_value(text: &str, id: SemiringId) -> Result<Value> {
    let t = text.trim();
    let body = t
        .strip_prefix('#')
        .ok_or_else(|| bad(t, "literals start with `#`"))?;
    match id {
        SemiringId::Boolean => match body {
            "t" | "1" => Ok(Value::Bool(true)),
            "f" | "0" => Ok(Value::Bool(false)),
            _ => Err(bad(t, "boolean literals are #t, #f, #0, #1")),
        },
        SemiringId::Natural => body
            .parse::<BigUint>()
            .map(Value::Nat)
            .map_err(|_| bad(t, "expected a natural number")),
        SemiringId::NonnegRational => {
            Value::new_rational(parse_rational(t, body)?).map_err(|e| bad(t, e.to_string()))
        }
        SemiringId::Tropical => {
            if body == "inf" {
                Ok(Value::Trop(None))
            } else {
                Ok(Value::Trop(Some(parse_rational(t, body)?)))
            }
        }
        SemiringId::Lukasiewicz => Value::new_lukasiewicz(parse_rational(t, body)?)
            .map_err(|e| bad(t, e.to_string())),
        SemiringId::NaturalPolynomial => {
            if let Some(inner) = body.strip_prefix("poly{").and_then(|b| b.strip_suffix('}')) {
                parse_polynomial(inner)
                    .map(Value::Poly)
                    .map_err(|e| bad(t, e))
            } else {
                body.parse::<BigUint>()
                    .map(|c| Value::Poly(Polynomial::constant(c)))
                    .map_err(|_| bad(t, "expected #poly{...} or a natural number"))
            }
        }
    }
}

fn write_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "#{}", r.numer())
    } else {
        write!(f, "#{}/{}", r.numer(), r.denom())
    }
}

pub(super) fn write_value(v: &Value, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match v {
        Value::Bool(true) => write!(f, "#t"),
        Value::Bool(false) => write!(f, "#f"),
        Value::Nat(n) => write!(f, "#{n}"),
        Value::Rat(r) | Value::Luk(r) => write_rational(r, f),
        Value::Trop(None) => write!(f, "#inf"),
        Value::Trop(Some(r)) => write_rational(r, f),
        Value::Poly(p) => write!(f, "#poly{{{p}}}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_forms() {
        assert_eq!(parse_value("#t", SemiringId::Boolean).unwrap(), Value::Bool(true));
        assert_eq!(parse_value("#3", SemiringId::Natural).unwrap(), Value::nat(3));
        assert_eq!(
            parse_value("#6/8", SemiringId::Lukasiewicz).unwrap(),
            Value::lukasiewicz(3, 4).unwrap()
        );
        assert_eq!(
            parse_value("#inf", SemiringId::Tropical).unwrap(),
            Value::tropical_infinity()
        );
        assert_eq!(
            parse_value("#-2", SemiringId::Tropical).unwrap(),
            Value::tropical(-2, 1)
        );
        let p = parse_value("#poly{2*x^2*y + 1}", SemiringId::NaturalPolynomial).unwrap();
        assert_eq!(p.to_string(), "#poly{2*x^2*y + 1}");
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(parse_value("#3/2", SemiringId::Lukasiewicz).is_err());
        assert!(parse_value("#-1", SemiringId::NonnegRational).is_err());
        assert!(parse_value("3", SemiringId::Natural).is_err());
        assert!(parse_value("#1/0", SemiringId::Tropical).is_err());
    }

    #[test]
    fn print_parse_round_trip_on_defaults() {
        for id in SemiringId::ALL {
            for v in id.default_universe() {
                assert_eq!(parse_value(&v.to_string(), id).unwrap(), v);
            }
        }
    }
}
