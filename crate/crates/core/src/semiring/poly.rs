//! Multivariate polynomials with natural coefficients, ℕ[X].
//!
//! Canonical form: a map from monomials to nonzero coefficients. A monomial is
//! a list of `(indeterminate, exponent)` pairs sorted by name with every
//! exponent ≥ 1, so structural equality is polynomial equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Self {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (String, u32)>>(powers: I) -> Self {
        let mut acc: BTreeMap<String, u32> = BTreeMap::new();
        for (name, e) in powers {
            if e > 0 {
                *acc.entry(name).or_insert(0) += e;
            }
        }
        Monomial(acc.into_iter().collect())
    }

    pub fn powers(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).cloned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigUint>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: BigUint) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::unit(), c);
        p
    }

    pub fn one() -> Self {
        Polynomial::constant(BigUint::one())
    }

    pub fn var(name: &str) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::var(name), BigUint::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigUint)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigUint) {
        if c.is_zero() {
            return;
        }
        *self.terms.entry(m).or_insert_with(BigUint::zero) += c;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigUint)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::unit())
                .is_some_and(|c| c.is_one())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Coefficientwise order: every coefficient of `self` is at most the
    /// matching coefficient of `other`.
    pub fn coefficientwise_leq(&self, other: &Polynomial) -> bool {
        self.terms.iter().all(|(m, c)| match other.terms.get(m) {
            Some(d) => c <= d,
            None => false,
        })
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest-degree monomials first, constants last
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.0.iter().map(|(_, e)| e).sum();
            let db: u32 = b.0.iter().map(|(_, e)| e).sum();
            db.cmp(&da).then_with(|| a.cmp(b))
        });
        for (idx, (m, c)) in terms.into_iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !c.is_one() || m.is_unit() {
                parts.push(c.to_string());
            }
            for (name, e) in &m.0 {
                if *e == 1 {
                    parts.push(name.clone());
                } else {
                    parts.push(format!("{name}^{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// Parses the body of a `#poly{...}` literal: a `+`-separated sum of
/// `*`-separated factors, each a natural number or `name` / `name^k`.
pub fn parse_polynomial(body: &str) -> Result<Polynomial, String> {
    let body = body.trim();
    if body.is_empty() {
        return Err("empty polynomial".into());
    }
    let mut out = Polynomial::zero();
    for term in body.split('+') {
        let term = term.trim();
        if term.is_empty() {
            return Err("empty term".into());
        }
        let mut coeff = BigUint::one();
        let mut powers = Vec::new();
        for factor in term.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err("empty factor".into());
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                coeff *= factor
                    .parse::<BigUint>()
                    .map_err(|e| format!("bad coefficient `{factor}`: {e}"))?;
                continue;
            }
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| format!("bad exponent in `{factor}`"))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let valid = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(format!("bad indeterminate `{name}`"));
            }
            powers.push((name.to_string(), exp));
        }
        out.add_term(Monomial::from_powers(powers), coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse_agree() {
        let p = parse_polynomial("2*x^2*y + 1").unwrap();
        assert_eq!(p.to_string(), "2*x^2*y + 1");
        assert_eq!(parse_polynomial(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn canonical_form_merges_terms() {
        let a = parse_polynomial("x*y + y*x + 0").unwrap();
        let b = parse_polynomial("2*x*y").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn product_distributes() {
        let x = Polynomial::var("x");
        let one = Polynomial::one();
        let sq = x.add(&one).mul(&x.add(&one));
        assert_eq!(sq, parse_polynomial("x^2 + 2*x + 1").unwrap());
    }

    #[test]
    fn coefficientwise_order_is_partial() {
        let x = Polynomial::var("x");
        let y = Polynomial::var("y");
        assert!(!x.coefficientwise_leq(&y));
        assert!(!y.coefficientwise_leq(&x));
        assert!(Polynomial::zero().coefficientwise_leq(&x));
    }
}
