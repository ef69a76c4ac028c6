//! Syntax trees, assignments and K-interpretations for the three logics.

mod desugar;
mod interp;
mod validate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::semiring::{SemiringId, Value};

pub use desugar::{desugar_fo, desugar_pl};
pub(crate) use interp::tuple_count;
pub use interp::{FOAssignment, KInterpretation, RelTable, ORDER_REL};
pub use validate::{validate_eso, validate_fo, validate_pl};

/// Relation symbols with their arities.
pub type Vocabulary = BTreeMap<String, usize>;

type B<T> = Box<T>;

/// Propositional formulas. The last six variants are surface sugar that
/// [`desugar_pl`] rewrites into the first seven.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PLFormula {
    Prop(String),
    NegProp(String),
    Const(Value),
    And(B<PLFormula>, B<PLFormula>),
    Or(B<PLFormula>, B<PLFormula>),
    Eq(B<PLFormula>, B<PLFormula>),
    Leq(B<PLFormula>, B<PLFormula>),
    Neq(B<PLFormula>, B<PLFormula>),
    NotLeq(B<PLFormula>, B<PLFormula>),
    BNot(B<PLFormula>),
    BAnd(B<PLFormula>, B<PLFormula>),
    BOr(B<PLFormula>, B<PLFormula>),
    BImp(B<PLFormula>, B<PLFormula>),
}

/// First-order formulas; sugar variants as for [`PLFormula`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FOFormula {
    VarEq(String, String),
    VarNeq(String, String),
    Const(Value),
    Atom(String, Vec<String>),
    NegAtom(String, Vec<String>),
    And(B<FOFormula>, B<FOFormula>),
    Or(B<FOFormula>, B<FOFormula>),
    Eq(B<FOFormula>, B<FOFormula>),
    Leq(B<FOFormula>, B<FOFormula>),
    Exists(String, B<FOFormula>),
    Forall(String, B<FOFormula>),
    Neq(B<FOFormula>, B<FOFormula>),
    NotLeq(B<FOFormula>, B<FOFormula>),
    BNot(B<FOFormula>),
    BAnd(B<FOFormula>, B<FOFormula>),
    BOr(B<FOFormula>, B<FOFormula>),
    BImp(B<FOFormula>, B<FOFormula>),
}

/// `∃R₁ … ∃R_k matrix`, quantifiers in prefix position only.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ESOSentence {
    pub prefix: Vec<(String, usize)>,
    pub matrix: FOFormula,
}

macro_rules! binary_ctors {
    ($t:ident) => {
        impl $t {
            pub fn and(a: $t, b: $t) -> $t {
                $t::And(Box::new(a), Box::new(b))
            }
            pub fn or(a: $t, b: $t) -> $t {
                $t::Or(Box::new(a), Box::new(b))
            }
            pub fn eq(a: $t, b: $t) -> $t {
                $t::Eq(Box::new(a), Box::new(b))
            }
            pub fn leq(a: $t, b: $t) -> $t {
                $t::Leq(Box::new(a), Box::new(b))
            }
            pub fn neq(a: $t, b: $t) -> $t {
                $t::Neq(Box::new(a), Box::new(b))
            }
            pub fn not_leq(a: $t, b: $t) -> $t {
                $t::NotLeq(Box::new(a), Box::new(b))
            }
            pub fn bnot(a: $t) -> $t {
                $t::BNot(Box::new(a))
            }
            pub fn band(a: $t, b: $t) -> $t {
                $t::BAnd(Box::new(a), Box::new(b))
            }
            pub fn bor(a: $t, b: $t) -> $t {
                $t::BOr(Box::new(a), Box::new(b))
            }
            pub fn bimp(a: $t, b: $t) -> $t {
                $t::BImp(Box::new(a), Box::new(b))
            }

            /// Left-nested conjunction; `one` for an empty list.
            pub fn and_all<I: IntoIterator<Item = $t>>(items: I, one: Value) -> $t {
                items.into_iter().reduce($t::and).unwrap_or($t::Const(one))
            }

            /// Balanced Boolean conjunction; `one` for an empty list. Keeps
            /// the depth logarithmic for the long conjunctions reductions emit.
            pub fn band_all<I: IntoIterator<Item = $t>>(items: I, one: Value) -> $t {
                balanced(items.into_iter().collect(), &$t::band).unwrap_or($t::Const(one))
            }

            /// Balanced Boolean disjunction; `zero` for an empty list.
            pub fn bor_all<I: IntoIterator<Item = $t>>(items: I, zero: Value) -> $t {
                balanced(items.into_iter().collect(), &$t::bor).unwrap_or($t::Const(zero))
            }
        }
    };
}

/// Folds `items` pairwise into a tree of depth ⌈log₂ len⌉, keeping order.
fn balanced<T>(mut items: Vec<T>, join: &dyn Fn(T, T) -> T) -> Option<T> {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => join(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop()
}

binary_ctors!(PLFormula);
binary_ctors!(FOFormula);

impl PLFormula {
    pub fn prop(name: &str) -> PLFormula {
        PLFormula::Prop(name.to_string())
    }

    pub fn neg_prop(name: &str) -> PLFormula {
        PLFormula::NegProp(name.to_string())
    }

    /// Direct children, in order.
    pub fn children(&self) -> Vec<&PLFormula> {
        use PLFormula::*;
        match self {
            Prop(_) | NegProp(_) | Const(_) => vec![],
            BNot(a) => vec![a],
            And(a, b) | Or(a, b) | Eq(a, b) | Leq(a, b) | Neq(a, b) | NotLeq(a, b)
            | BAnd(a, b) | BOr(a, b) | BImp(a, b) => vec![a, b],
        }
    }

    /// True for the comparison kinds `=`, `≤`, `≠`, `≰`.
    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            PLFormula::Eq(..) | PLFormula::Leq(..) | PLFormula::Neq(..) | PLFormula::NotLeq(..)
        )
    }

    pub fn is_sugar(&self) -> bool {
        matches!(
            self,
            PLFormula::Neq(..)
                | PLFormula::NotLeq(..)
                | PLFormula::BNot(..)
                | PLFormula::BAnd(..)
                | PLFormula::BOr(..)
                | PLFormula::BImp(..)
        )
    }

    /// True if no sugar node occurs anywhere in the tree.
    pub fn is_core(&self) -> bool {
        !self.is_sugar() && self.children().into_iter().all(PLFormula::is_core)
    }

    /// Signed literals in order of first occurrence (left to right).
    pub fn literals(&self) -> Vec<Literal> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_literals(&mut |l| {
            if seen.insert(l.clone()) {
                out.push(l);
            }
        });
        out
    }

    /// Proposition names in order of first occurrence.
    pub fn propositions(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit_literals(&mut |l| {
            if seen.insert(l.name.clone()) {
                out.push(l.name);
            }
        });
        out
    }

    fn visit_literals(&self, f: &mut dyn FnMut(Literal)) {
        match self {
            PLFormula::Prop(p) => f(Literal::pos(p)),
            PLFormula::NegProp(p) => f(Literal::neg(p)),
            _ => {
                for c in self.children() {
                    c.visit_literals(f);
                }
            }
        }
    }

    /// Constants in order of occurrence (with repetitions).
    pub fn constants(&self) -> Vec<&Value> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a PLFormula, out: &mut Vec<&'a Value>) {
            if let PLFormula::Const(c) = f {
                out.push(c);
            }
            for c in f.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(PLFormula::size).sum::<usize>()
    }
}

impl FOFormula {
    pub fn atom(rel: &str, vars: &[&str]) -> FOFormula {
        FOFormula::Atom(rel.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn neg_atom(rel: &str, vars: &[&str]) -> FOFormula {
        FOFormula::NegAtom(rel.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn var_eq(x: &str, y: &str) -> FOFormula {
        FOFormula::VarEq(x.to_string(), y.to_string())
    }

    pub fn exists(x: &str, body: FOFormula) -> FOFormula {
        FOFormula::Exists(x.to_string(), Box::new(body))
    }

    pub fn forall(x: &str, body: FOFormula) -> FOFormula {
        FOFormula::Forall(x.to_string(), Box::new(body))
    }

    pub fn exists_all<S: AsRef<str>>(vars: &[S], body: FOFormula) -> FOFormula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| FOFormula::exists(v.as_ref(), acc))
    }

    pub fn forall_all<S: AsRef<str>>(vars: &[S], body: FOFormula) -> FOFormula {
        vars.iter()
            .rev()
            .fold(body, |acc, v| FOFormula::forall(v.as_ref(), acc))
    }

    pub fn children(&self) -> Vec<&FOFormula> {
        use FOFormula::*;
        match self {
            VarEq(..) | VarNeq(..) | Const(_) | Atom(..) | NegAtom(..) => vec![],
            BNot(a) | Exists(_, a) | Forall(_, a) => vec![a],
            And(a, b) | Or(a, b) | Eq(a, b) | Leq(a, b) | Neq(a, b) | NotLeq(a, b)
            | BAnd(a, b) | BOr(a, b) | BImp(a, b) => vec![a, b],
        }
    }

    pub fn is_sugar(&self) -> bool {
        matches!(
            self,
            FOFormula::Neq(..)
                | FOFormula::NotLeq(..)
                | FOFormula::BNot(..)
                | FOFormula::BAnd(..)
                | FOFormula::BOr(..)
                | FOFormula::BImp(..)
        )
    }

    pub fn is_core(&self) -> bool {
        !self.is_sugar() && self.children().into_iter().all(FOFormula::is_core)
    }

    /// Free variables, FV(φ ∘ ψ) = FV(φ) ∪ FV(ψ).
    pub fn free_vars(&self) -> BTreeSet<String> {
        use FOFormula::*;
        match self {
            VarEq(x, y) | VarNeq(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            Const(_) => BTreeSet::new(),
            Atom(_, xs) | NegAtom(_, xs) => xs.iter().cloned().collect(),
            Exists(x, a) | Forall(x, a) => {
                let mut s = a.free_vars();
                s.remove(x);
                s
            }
            _ => self
                .children()
                .into_iter()
                .flat_map(FOFormula::free_vars)
                .collect(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Relation symbols used, with the arity of their first occurrence.
    pub fn relations(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        fn go(f: &FOFormula, out: &mut BTreeMap<String, usize>) {
            if let FOFormula::Atom(r, xs) | FOFormula::NegAtom(r, xs) = f {
                out.entry(r.clone()).or_insert(xs.len());
            }
            for c in f.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn constants(&self) -> Vec<&Value> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a FOFormula, out: &mut Vec<&'a Value>) {
            if let FOFormula::Const(c) = f {
                out.push(c);
            }
            for c in f.children() {
                go(c, out);
            }
        }
        go(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(FOFormula::size).sum::<usize>()
    }
}

/// A proposition `p` or its negation `¬p`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub name: String,
    pub negated: bool,
}

impl Literal {
    pub fn pos(name: &str) -> Literal {
        Literal {
            name: name.to_string(),
            negated: false,
        }
    }

    pub fn neg(name: &str) -> Literal {
        Literal {
            name: name.to_string(),
            negated: true,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "~{}", self.name)
        } else {
            f.write_str(&self.name)
        }
    }
}

/// An assignment s on signed literals; `p` and `¬p` are independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PLAssignment {
    pub semiring: SemiringId,
    values: BTreeMap<Literal, Value>,
}

impl PLAssignment {
    pub fn new(semiring: SemiringId) -> Self {
        PLAssignment {
            semiring,
            values: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, lit: Literal, v: Value) -> Result<()> {
        if v.id() != self.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring,
                right: v.id(),
            });
        }
        self.values.insert(lit, v);
        Ok(())
    }

    pub fn with(mut self, lit: Literal, v: Value) -> Result<Self> {
        self.set(lit, v)?;
        Ok(self)
    }

    pub fn get(&self, lit: &Literal) -> Option<&Value> {
        self.values.get(lit)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Literal, &Value)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds `p ↦ v` together with `¬p ↦ 1` if `v = 0` and `¬p ↦ 0` otherwise.
    pub fn model_defining<I>(semiring: SemiringId, positives: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Value)>,
    {
        let mut s = PLAssignment::new(semiring);
        for (p, v) in positives {
            let neg = semiring.bool(v.is_zero());
            s.set(Literal::pos(&p), v)?;
            s.set(Literal::neg(&p), neg)?;
        }
        Ok(s)
    }
}
