//! Existential sentences over the semiring signature, and the translation
//! of flat propositional formulas into them.

use std::collections::BTreeMap;
use std::fmt;

use super::flatten::is_flat;
use crate::error::{Error, Result};
use crate::logic::{Literal, PLFormula};
use crate::semiring::{compare, Relation, SemiringId, SemiringProfile, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(Value),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// Quantifier-free matrix: classical connectives over term atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtkFormula {
    True,
    False,
    Eq(Term, Term),
    Neq(Term, Term),
    Leq(Term, Term),
    NotLeq(Term, Term),
    And(Box<EtkFormula>, Box<EtkFormula>),
    Or(Box<EtkFormula>, Box<EtkFormula>),
}

/// `∃x₁ … ∃x_k matrix`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtkSentence {
    pub vars: Vec<String>,
    pub matrix: EtkFormula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtkArtifact {
    pub sentence: EtkSentence,
    /// g: signed literal ↦ variable name; injective.
    pub literal_map: BTreeMap<Literal, String>,
    /// The constant set X.
    pub constants: Vec<Value>,
    /// Set when the matrix contains ≤ or ≰ atoms.
    pub uses_order: bool,
}

impl Term {
    fn eval(&self, vals: &BTreeMap<&str, &Value>) -> Result<Value> {
        Ok(match self {
            Term::Var(x) => (*vals
                .get(x.as_str())
                .ok_or_else(|| Error::UnassignedVariable(x.clone()))?)
            .clone(),
            Term::Const(c) => c.clone(),
            Term::Add(a, b) => a.eval(vals)?.add(&b.eval(vals)?)?,
            Term::Mul(a, b) => a.eval(vals)?.mul(&b.eval(vals)?)?,
        })
    }
}

impl EtkFormula {
    fn holds(&self, p: &SemiringProfile, vals: &BTreeMap<&str, &Value>) -> Result<bool> {
        let cmp = |rel, a: &Term, b: &Term| -> Result<bool> {
            Ok(compare(p, rel, &a.eval(vals)?, &b.eval(vals)?)?.holds())
        };
        Ok(match self {
            EtkFormula::True => true,
            EtkFormula::False => false,
            EtkFormula::Eq(a, b) => cmp(Relation::Eq, a, b)?,
            EtkFormula::Neq(a, b) => !cmp(Relation::Eq, a, b)?,
            EtkFormula::Leq(a, b) => cmp(Relation::Leq, a, b)?,
            EtkFormula::NotLeq(a, b) => !cmp(Relation::Leq, a, b)?,
            EtkFormula::And(a, b) => a.holds(p, vals)? && b.holds(p, vals)?,
            EtkFormula::Or(a, b) => a.holds(p, vals)? || b.holds(p, vals)?,
        })
    }

    /// Classical negation, pushed to the atoms.
    pub fn negate(self) -> EtkFormula {
        use EtkFormula as E;
        match self {
            E::True => E::False,
            E::False => E::True,
            E::Eq(a, b) => E::Neq(a, b),
            E::Neq(a, b) => E::Eq(a, b),
            E::Leq(a, b) => E::NotLeq(a, b),
            E::NotLeq(a, b) => E::Leq(a, b),
            E::And(a, b) => E::Or(Box::new(a.negate()), Box::new(b.negate())),
            E::Or(a, b) => E::And(Box::new(a.negate()), Box::new(b.negate())),
        }
    }

    fn and(a: EtkFormula, b: EtkFormula) -> EtkFormula {
        match (a, b) {
            (EtkFormula::False, _) | (_, EtkFormula::False) => EtkFormula::False,
            (EtkFormula::True, x) | (x, EtkFormula::True) => x,
            (a, b) => EtkFormula::And(Box::new(a), Box::new(b)),
        }
    }

    fn or(a: EtkFormula, b: EtkFormula) -> EtkFormula {
        match (a, b) {
            (EtkFormula::True, _) | (_, EtkFormula::True) => EtkFormula::True,
            (EtkFormula::False, x) | (x, EtkFormula::False) => x,
            (a, b) => EtkFormula::Or(Box::new(a), Box::new(b)),
        }
    }

    fn uses_order(&self) -> bool {
        match self {
            EtkFormula::Leq(..) | EtkFormula::NotLeq(..) => true,
            EtkFormula::And(a, b) | EtkFormula::Or(a, b) => a.uses_order() || b.uses_order(),
            _ => false,
        }
    }
}

impl EtkSentence {
    /// Truth of the matrix under `vals`, given in `vars` order.
    pub fn holds(&self, id: SemiringId, vals: &[Value]) -> Result<bool> {
        if vals.len() != self.vars.len() {
            return Err(Error::Contract(format!(
                "{} values for {} variables",
                vals.len(),
                self.vars.len()
            )));
        }
        let map = self.vars.iter().map(String::as_str).zip(vals).collect();
        self.matrix.holds(&SemiringProfile::of(id), &map)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Const(c) => write!(f, "{c}"),
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

impl fmt::Display for EtkFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtkFormula::True => f.write_str("true"),
            EtkFormula::False => f.write_str("false"),
            EtkFormula::Eq(a, b) => write!(f, "{a} = {b}"),
            EtkFormula::Neq(a, b) => write!(f, "{a} != {b}"),
            EtkFormula::Leq(a, b) => write!(f, "{a} <= {b}"),
            EtkFormula::NotLeq(a, b) => write!(f, "{a} !<= {b}"),
            EtkFormula::And(a, b) => write!(f, "({a} & {b})"),
            EtkFormula::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

impl fmt::Display for EtkSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in &self.vars {
            write!(f, "exists {x} ")?;
        }
        write!(f, "{}", self.matrix)
    }
}

/// Variable name for a signed literal: `x_p` for p, `xn_p` for ¬p.
pub fn etk_var(l: &Literal) -> String {
    if l.negated {
        format!("xn_{}", l.name)
    } else {
        format!("x_{}", l.name)
    }
}

struct Tr<'a> {
    g: &'a BTreeMap<Literal, String>,
    zero: Value,
}

impl Tr<'_> {
    fn term(&self, f: &PLFormula) -> Result<Term> {
        use PLFormula as P;
        Ok(match f {
            P::Prop(p) => Term::Var(self.g[&Literal::pos(p)].clone()),
            P::NegProp(p) => Term::Var(self.g[&Literal::neg(p)].clone()),
            P::Const(c) => Term::Const(c.clone()),
            P::And(a, b) => Term::Mul(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            P::Or(a, b) => Term::Add(Box::new(self.term(a)?), Box::new(self.term(b)?)),
            _ => return Err(Error::Contract("comparison inside a comparison".into())),
        })
    }

    /// A classical formula true iff `f` is nonzero.
    fn truth(&self, f: &PLFormula) -> Result<EtkFormula> {
        use PLFormula as P;
        let lit = |l: Literal| {
            EtkFormula::Neq(Term::Var(self.g[&l].clone()), Term::Const(self.zero.clone()))
        };
        Ok(match f {
            P::Prop(p) => lit(Literal::pos(p)),
            P::NegProp(p) => lit(Literal::neg(p)),
            P::Const(c) => {
                if c.is_zero() {
                    EtkFormula::False
                } else {
                    EtkFormula::True
                }
            }
            P::And(a, b) => EtkFormula::and(self.truth(a)?, self.truth(b)?),
            P::Or(a, b) => EtkFormula::or(self.truth(a)?, self.truth(b)?),
            P::Eq(a, b) => EtkFormula::Eq(self.term(a)?, self.term(b)?),
            P::Neq(a, b) => EtkFormula::Neq(self.term(a)?, self.term(b)?),
            P::Leq(a, b) => EtkFormula::Leq(self.term(a)?, self.term(b)?),
            P::NotLeq(a, b) => EtkFormula::NotLeq(self.term(a)?, self.term(b)?),
            _ => return Err(Error::Contract("Boolean connective in a flat formula".into())),
        })
    }
}

/// θ = ∃x₁…∃x_k ψ for a flat `phi` whose constants lie in `x`; `id` is the
/// target semiring, which must be positive and commutative.
pub fn sat_to_etk(phi: &PLFormula, x: &[Value], id: SemiringId) -> Result<EtkArtifact> {
    let profile = SemiringProfile::of(id);
    if !profile.positive || !profile.commutative {
        return Err(Error::Contract(format!(
            "{id} is not positive and commutative"
        )));
    }
    if !is_flat(phi) {
        return Err(Error::Contract("formula is not flat".into()));
    }
    for c in phi.constants() {
        if c.id() != id {
            return Err(Error::SemiringMismatch {
                left: id,
                right: c.id(),
            });
        }
        if !x.contains(c) {
            return Err(Error::Contract(format!("constant {c} is not in X")));
        }
    }
    let mut g = BTreeMap::new();
    let mut vars = Vec::new();
    for p in phi.propositions() {
        for l in [Literal::pos(&p), Literal::neg(&p)] {
            let v = etk_var(&l);
            vars.push(v.clone());
            g.insert(l, v);
        }
    }
    let tr = Tr {
        g: &g,
        zero: id.zero(),
    };
    let matrix = tr.truth(phi)?;
    let uses_order = matrix.uses_order();
    Ok(EtkArtifact {
        sentence: EtkSentence { vars, matrix },
        literal_map: g,
        constants: x.to_vec(),
        uses_order,
    })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::solvers::{etk_bounded, sat_bruteforce, SearchBudget};

    const NAT: SemiringId = SemiringId::Natural;

    fn p(x: &str) -> PLFormula {
        PLFormula::prop(x)
    }

    fn c(n: u32) -> PLFormula {
        PLFormula::Const(Value::nat(n))
    }

    fn var(x: &str) -> Term {
        Term::Var(x.into())
    }

    fn consts() -> Vec<Value> {
        (0..4).map(Value::nat).collect()
    }

    #[test]
    fn conjunction_of_propositions() {
        let art = sat_to_etk(&PLFormula::and(p("p"), p("q")), &consts(), NAT).unwrap();
        assert_eq!(art.sentence.vars, ["x_p", "xn_p", "x_q", "xn_q"]);
        let zero = || Term::Const(Value::nat(0));
        let want = EtkFormula::and(
            EtkFormula::Neq(var("x_p"), zero()),
            EtkFormula::Neq(var("x_q"), zero()),
        );
        assert_eq!(art.sentence.matrix, want);
        assert_eq!(art.literal_map[&Literal::neg("q")], "xn_q");
        assert!(!art.uses_order);
    }

    #[test]
    fn comparison_becomes_a_term_atom() {
        let f = PLFormula::leq(PLFormula::or(p("p"), p("q")), PLFormula::and(p("p"), p("q")));
        let art = sat_to_etk(&f, &consts(), NAT).unwrap();
        let want = EtkFormula::Leq(
            Term::Add(Box::new(var("x_p")), Box::new(var("x_q"))),
            Term::Mul(Box::new(var("x_p")), Box::new(var("x_q"))),
        );
        assert_eq!(art.sentence.matrix, want);
        assert!(art.uses_order);
    }

    #[test]
    fn constants_fold_outside_comparisons() {
        let art = sat_to_etk(&c(1), &consts(), NAT).unwrap();
        assert_eq!(art.sentence.matrix, EtkFormula::True);
        assert!(art.sentence.vars.is_empty());
        let art = sat_to_etk(&PLFormula::or(c(0), p("p")), &consts(), NAT).unwrap();
        let want = EtkFormula::Neq(var("x_p"), Term::Const(Value::nat(0)));
        assert_eq!(art.sentence.matrix, want);
    }

    #[test]
    fn contract_checks() {
        let nested = PLFormula::eq(PLFormula::eq(p("p"), c(1)), c(0));
        assert!(matches!(sat_to_etk(&nested, &consts(), NAT), Err(Error::Contract(_))));
        let sugar = PLFormula::band(p("p"), p("q"));
        assert!(matches!(sat_to_etk(&sugar, &consts(), NAT), Err(Error::Contract(_))));
        let outside = PLFormula::eq(p("p"), c(7));
        assert!(matches!(sat_to_etk(&outside, &consts(), NAT), Err(Error::Contract(_))));
    }

    fn random_term(rng: &mut ChaCha8Rng, depth: u32) -> PLFormula {
        let props = ["p", "q", "r", "s"];
        if depth == 0 || rng.gen_bool(0.35) {
            let name = props[rng.gen_range(0..props.len())];
            return match rng.gen_range(0..5) {
                0 => c(rng.gen_range(0..4)),
                1 => PLFormula::neg_prop(name),
                _ => p(name),
            };
        }
        let (a, b) = (random_term(rng, depth - 1), random_term(rng, depth - 1));
        if rng.gen() {
            PLFormula::and(a, b)
        } else {
            PLFormula::or(a, b)
        }
    }

    fn random_flat(rng: &mut ChaCha8Rng, depth: u32) -> PLFormula {
        if depth == 0 || rng.gen_bool(0.3) {
            if rng.gen_bool(0.3) {
                return random_term(rng, 2);
            }
            let (a, b) = (random_term(rng, 2), random_term(rng, 2));
            return match rng.gen_range(0..4) {
                0 => PLFormula::eq(a, b),
                1 => PLFormula::leq(a, b),
                2 => PLFormula::neq(a, b),
                _ => PLFormula::not_leq(a, b),
            };
        }
        let (a, b) = (random_flat(rng, depth - 1), random_flat(rng, depth - 1));
        if rng.gen() {
            PLFormula::and(a, b)
        } else {
            PLFormula::or(a, b)
        }
    }

    #[test]
    fn satisfiability_matches_bounded_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let budget = SearchBudget::new(consts(), 10_000_000).unwrap();
        for _ in 0..150 {
            let f = random_flat(&mut rng, 2);
            assert!(is_flat(&f));
            let art = sat_to_etk(&f, &consts(), NAT).unwrap();
            let sat = sat_bruteforce(&f, &budget).unwrap().assignment().is_some();
            let etk = etk_bounded(&art.sentence, &budget).unwrap();
            assert_eq!(sat, matches!(etk, crate::solvers::EtkOutcome::True(_)), "{f:?}");
        }
    }
}
