//! K-interpretations over finite domains and first-order assignments.

use std::collections::BTreeMap;

use super::Vocabulary;
use crate::error::{Error, Result};
use crate::semiring::{SemiringId, Value};

/// Name of the built-in order relation of ordered interpretations.
pub const ORDER_REL: &str = "Lt";

/// Values of one relation symbol: `pos[i]` is π(R(ā)) and `neg[i]` is
/// π(¬R(ā)), where `i` is the big-endian base-|A| index of ā.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelTable {
    pub arity: usize,
    pub pos: Vec<Value>,
    pub neg: Vec<Value>,
}

/// π : Lit_{A,τ} → K over the domain {a₀, …, a_{n−1}}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KInterpretation {
    pub semiring: SemiringId,
    pub domain: usize,
    relations: BTreeMap<String, RelTable>,
}

pub(crate) fn tuple_count(domain: usize, arity: usize) -> usize {
    domain.pow(arity as u32)
}

pub(crate) fn tuple_index(domain: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &a| acc * domain + a)
}

pub(crate) fn index_tuple(domain: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = idx % domain.max(1);
        idx /= domain.max(1);
    }
    t
}

impl KInterpretation {
    /// All literals valued 0.
    pub fn new(semiring: SemiringId, domain: usize, vocab: &Vocabulary) -> Self {
        let mut k = KInterpretation {
            semiring,
            domain,
            relations: BTreeMap::new(),
        };
        for (name, &arity) in vocab {
            k.add_relation(name, arity);
        }
        k
    }

    /// Like [`KInterpretation::new`] plus `Lt` valued by index order.
    pub fn ordered(semiring: SemiringId, domain: usize, vocab: &Vocabulary) -> Self {
        let mut k = KInterpretation::new(semiring, domain, vocab);
        k.add_relation(ORDER_REL, 2);
        for i in 0..domain {
            for j in 0..domain {
                let lt = i < j;
                k.set(ORDER_REL, &[i, j], false, semiring.bool(lt)).unwrap();
                k.set(ORDER_REL, &[i, j], true, semiring.bool(!lt)).unwrap();
            }
        }
        k
    }

    /// Adds a relation with every literal valued 0; keeps an existing one.
    pub fn add_relation(&mut self, name: &str, arity: usize) {
        let n = tuple_count(self.domain, arity);
        let zero = self.semiring.zero();
        self.relations
            .entry(name.to_string())
            .or_insert_with(|| RelTable {
                arity,
                pos: vec![zero.clone(); n],
                neg: vec![zero; n],
            });
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.relations
            .iter()
            .map(|(n, t)| (n.clone(), t.arity))
            .collect()
    }

    pub fn relation(&self, name: &str) -> Option<&RelTable> {
        self.relations.get(name)
    }

    pub fn relations(&self) -> impl Iterator<Item = (&String, &RelTable)> {
        self.relations.iter()
    }

    pub(crate) fn relation_mut(&mut self, name: &str) -> Option<&mut RelTable> {
        self.relations.get_mut(name)
    }

    fn check_tuple(&self, name: &str, tuple: &[usize]) -> Result<&RelTable> {
        let t = self
            .relations
            .get(name)
            .ok_or_else(|| Error::MissingFact(name.to_string()))?;
        if t.arity != tuple.len() {
            return Err(Error::Validation(format!(
                "arity mismatch: {name} has arity {}, got {} arguments",
                t.arity,
                tuple.len()
            )));
        }
        if let Some(a) = tuple.iter().find(|&&a| a >= self.domain) {
            return Err(Error::Validation(format!(
                "domain index {a} out of range 0..{}",
                self.domain
            )));
        }
        Ok(t)
    }

    pub fn set(&mut self, name: &str, tuple: &[usize], negated: bool, v: Value) -> Result<()> {
        if v.id() != self.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring,
                right: v.id(),
            });
        }
        self.check_tuple(name, tuple)?;
        let idx = tuple_index(self.domain, tuple);
        let t = self.relations.get_mut(name).expect("checked");
        if negated {
            t.neg[idx] = v;
        } else {
            t.pos[idx] = v;
        }
        Ok(())
    }

    pub fn get(&self, name: &str, tuple: &[usize], negated: bool) -> Result<&Value> {
        let t = self.check_tuple(name, tuple)?;
        let idx = tuple_index(self.domain, tuple);
        Ok(if negated { &t.neg[idx] } else { &t.pos[idx] })
    }

    /// Sets R(ā) ↦ v and ¬R(ā) ↦ (1 if v = 0 else 0).
    pub fn set_model_defining(&mut self, name: &str, tuple: &[usize], v: Value) -> Result<()> {
        let neg = self.semiring.bool(v.is_zero());
        self.set(name, tuple, false, v)?;
        self.set(name, tuple, true, neg)
    }

    /// π(Lt(a_i, a_j)) is 1 iff i < j and 0 otherwise.
    pub fn is_ordered(&self) -> bool {
        let Some(t) = self.relations.get(ORDER_REL) else {
            return false;
        };
        if t.arity != 2 {
            return false;
        }
        (0..self.domain).all(|i| {
            (0..self.domain).all(|j| {
                let v = &t.pos[tuple_index(self.domain, &[i, j])];
                if i < j {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    /// π(R(ā)) = 0 iff π(¬R(ā)) ≠ 0, for every fact.
    pub fn is_model_defining(&self) -> bool {
        self.relations.values().all(|t| {
            t.pos
                .iter()
                .zip(&t.neg)
                .all(|(p, n)| p.is_zero() != n.is_zero())
        })
    }

    /// π' extending `self` with the relations of `ext` (which must be new).
    pub fn extend(&self, ext: &KInterpretation) -> Result<KInterpretation> {
        if ext.semiring != self.semiring {
            return Err(Error::SemiringMismatch {
                left: self.semiring,
                right: ext.semiring,
            });
        }
        if ext.domain != self.domain {
            return Err(Error::Validation(format!(
                "extension domain {} differs from {}",
                ext.domain, self.domain
            )));
        }
        let mut out = self.clone();
        for (name, t) in &ext.relations {
            if out.relations.contains_key(name) {
                return Err(Error::Validation(format!(
                    "extension redefines base relation {name}"
                )));
            }
            out.relations.insert(name.clone(), t.clone());
        }
        Ok(out)
    }

    /// Every literal as `(relation, tuple, negated, value)`, in table order.
    pub fn literals(&self) -> Vec<(String, Vec<usize>, bool, Value)> {
        let mut out = Vec::new();
        for (name, t) in &self.relations {
            for idx in 0..t.pos.len() {
                let tuple = index_tuple(self.domain, t.arity, idx);
                out.push((name.clone(), tuple.clone(), false, t.pos[idx].clone()));
                out.push((name.clone(), tuple, true, t.neg[idx].clone()));
            }
        }
        out
    }
}

/// First-order assignment s : Var → A, as domain indices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FOAssignment {
    map: BTreeMap<String, usize>,
}

impl FOAssignment {
    pub fn new() -> Self {
        FOAssignment::default()
    }

    pub fn get(&self, x: &str) -> Option<usize> {
        self.map.get(x).copied()
    }

    /// s(a/x): a copy with `x` rebound to `a`.
    pub fn update(&self, x: &str, a: usize) -> FOAssignment {
        let mut s = self.clone();
        s.map.insert(x.to_string(), a);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, usize)> {
        self.map.iter().map(|(k, v)| (k, *v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_interpretation() {
        let k = KInterpretation::ordered(SemiringId::Natural, 3, &Vocabulary::new());
        assert!(k.is_ordered());
        assert!(k.get(ORDER_REL, &[0, 2], false).unwrap().is_one());
        assert!(k.get(ORDER_REL, &[2, 0], false).unwrap().is_zero());
        assert!(k.is_model_defining());
    }

    #[test]
    fn model_defining_check() {
        let vocab: Vocabulary = [("R".to_string(), 1)].into_iter().collect();
        let mut k = KInterpretation::new(SemiringId::Natural, 2, &vocab);
        assert!(!k.is_model_defining());
        k.set_model_defining("R", &[0], Value::nat(2)).unwrap();
        k.set_model_defining("R", &[1], Value::nat(0)).unwrap();
        assert!(k.is_model_defining());
        k.set("R", &[1], true, Value::nat(0)).unwrap();
        assert!(!k.is_model_defining());
    }

    #[test]
    fn tuple_indexing_round_trips() {
        for idx in 0..27 {
            assert_eq!(tuple_index(3, &index_tuple(3, 3, idx)), idx);
        }
    }

    #[test]
    fn update_is_a_copy() {
        let s = FOAssignment::new().update("x", 1);
        let t = s.update("x", 0);
        assert_eq!(s.get("x"), Some(1));
        assert_eq!(t.get("x"), Some(0));
    }
}
