//! Semantics ⟦·⟧ of the three logics.

mod fo;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::logic::{ESOSentence, FOAssignment, FOFormula, KInterpretation, PLAssignment, PLFormula};
use crate::semiring::{compare, Relation, SemiringProfile, Value};

pub(crate) use fo::CompiledFo;

/// How second-order quantifiers are resolved.
#[derive(Debug, Clone)]
pub enum EsoMode {
    /// An explicit extension π′ for exactly the quantified symbols.
    Witness(KInterpretation),
    /// Every total literal map for the quantified symbols with values in
    /// `universe`. With `model_defining` set, only {0,1}-valued
    /// model-defining extensions are tried (¬R(ā) is then determined by R(ā)).
    Exhaustive {
        universe: Vec<Value>,
        model_defining: bool,
        cap: u128,
    },
}

impl EsoMode {
    pub fn exhaustive(universe: Vec<Value>, cap: u128) -> EsoMode {
        EsoMode::Exhaustive {
            universe,
            model_defining: false,
            cap,
        }
    }

    pub fn model_defining(universe: Vec<Value>, cap: u128) -> EsoMode {
        EsoMode::Exhaustive {
            universe,
            model_defining: true,
            cap,
        }
    }
}

/// ⟦φ⟧_s. Every literal of φ must be assigned.
pub fn eval_pl(f: &PLFormula, s: &PLAssignment) -> Result<Value> {
    for lit in f.literals() {
        if s.get(&lit).is_none() {
            return Err(Error::MissingLiteral(lit.to_string()));
        }
    }
    let profile = SemiringProfile::of(s.semiring);
    pl(f, s, &profile)
}

fn pl(f: &PLFormula, s: &PLAssignment, profile: &SemiringProfile) -> Result<Value> {
    use crate::logic::Literal;
    use PLFormula as P;
    let id = s.semiring;
    let truth = |rel: Relation, a: &PLFormula, b: &PLFormula| -> Result<bool> {
        let l = pl(a, s, profile)?;
        let r = pl(b, s, profile)?;
        Ok(compare(profile, rel, &l, &r)?.holds())
    };
    let nz = |a: &PLFormula| -> Result<bool> { Ok(!pl(a, s, profile)?.is_zero()) };
    Ok(match f {
        P::Prop(p) => s.get(&Literal::pos(p)).expect("checked").clone(),
        P::NegProp(p) => s.get(&Literal::neg(p)).expect("checked").clone(),
        P::Const(c) => {
            if c.id() != id {
                return Err(Error::SemiringMismatch {
                    left: id,
                    right: c.id(),
                });
            }
            c.clone()
        }
        P::And(a, b) => {
            let l = pl(a, s, profile)?;
            if l.is_zero() {
                // still surface mismatches on the right
                pl(b, s, profile)?;
                l
            } else {
                l.mul(&pl(b, s, profile)?)?
            }
        }
        P::Or(a, b) => pl(a, s, profile)?.add(&pl(b, s, profile)?)?,
        P::Eq(a, b) => id.bool(truth(Relation::Eq, a, b)?),
        P::Leq(a, b) => id.bool(truth(Relation::Leq, a, b)?),
        P::Neq(a, b) => id.bool(!truth(Relation::Eq, a, b)?),
        P::NotLeq(a, b) => id.bool(!truth(Relation::Leq, a, b)?),
        P::BNot(a) => id.bool(!nz(a)?),
        P::BAnd(a, b) => id.bool(nz(a)? & nz(b)?),
        P::BOr(a, b) => id.bool(nz(a)? | nz(b)?),
        P::BImp(a, b) => id.bool(!nz(a)? | nz(b)?),
    })
}

/// ⟦φ⟧_{π,s}. ∃ is the |A|-fold sum and ∀ the |A|-fold product, unfolded in
/// domain-index order.
pub fn eval_fo(f: &FOFormula, pi: &KInterpretation, s: &FOAssignment) -> Result<Value> {
    CompiledFo::new(f).eval(pi, s)
}

fn check_sentence(c: &CompiledFo) -> Result<()> {
    match c.root_free_vars().first() {
        Some(x) => Err(Error::UnassignedVariable(x.to_string())),
        None => Ok(()),
    }
}

/// ⟦Φ⟧_π ∈ {0,1}.
pub fn eval_eso(phi: &ESOSentence, pi: &KInterpretation, mode: &EsoMode) -> Result<Value> {
    let id = pi.semiring;
    for (r, _) in &phi.prefix {
        if pi.relation(r).is_some() {
            return Err(Error::Validation(format!(
                "quantified relation {r} is in the base interpretation"
            )));
        }
    }
    let matrix = CompiledFo::new(&phi.matrix);
    check_sentence(&matrix)?;
    let empty = FOAssignment::new();
    match mode {
        EsoMode::Witness(ext) => {
            let got = ext.vocabulary();
            let want: std::collections::BTreeMap<_, _> = phi.prefix.iter().cloned().collect();
            if got != want {
                return Err(Error::Validation(format!(
                    "witness defines {:?}, prefix quantifies {:?}",
                    got.keys().collect::<Vec<_>>(),
                    want.keys().collect::<Vec<_>>()
                )));
            }
            let full = pi.extend(ext)?;
            Ok(id.bool(!matrix.eval(&full, &empty)?.is_zero()))
        }
        EsoMode::Exhaustive {
            universe,
            model_defining,
            cap,
        } => {
            let zero = id.zero();
            let one = id.one();
            let universe: Vec<Value> = if *model_defining {
                vec![zero.clone(), one.clone()]
            } else {
                if universe.is_empty() || !universe.contains(&zero) || !universe.contains(&one) {
                    return Err(Error::Validation(
                        "exhaustive universe must contain 0 and 1".into(),
                    ));
                }
                universe.clone()
            };
            if let Some(v) = universe.iter().find(|v| v.id() != id) {
                return Err(Error::SemiringMismatch {
                    left: id,
                    right: v.id(),
                });
            }
            // slots: (prefix index, tuple index, negated)
            let mut slots = Vec::new();
            let mut base = pi.clone();
            for (k, (r, ar)) in phi.prefix.iter().enumerate() {
                base.add_relation(r, *ar);
                let n = crate::logic::tuple_count(pi.domain, *ar);
                for idx in 0..n {
                    slots.push((k, idx, false));
                    if !*model_defining {
                        slots.push((k, idx, true));
                    }
                }
            }
            let radix = universe.len() as u128;
            let mut needed: u128 = 1;
            for _ in 0..slots.len() {
                needed = needed.saturating_mul(radix);
            }
            if needed > *cap {
                return Err(Error::BoundExceeded { needed, cap: *cap });
            }
            let total = needed as u64;
            let chunk = (total / 64).max(1);
            let chunks = total.div_ceil(chunk);
            let found = (0..chunks).into_par_iter().try_fold(
                || false,
                |acc, ch| -> Result<bool> {
                    if acc {
                        return Ok(true);
                    }
                    let mut interp = base.clone();
                    let start = ch * chunk;
                    let end = (start + chunk).min(total);
                    for cand in start..end {
                        let mut c = cand as u128;
                        for &(k, idx, neg) in &slots {
                            let v = universe[(c % radix) as usize].clone();
                            c /= radix;
                            let t = interp
                                .relation_mut(&phi.prefix[k].0)
                                .expect("added above");
                            if neg {
                                t.neg[idx] = v;
                            } else {
                                if *model_defining {
                                    t.neg[idx] = id.bool(v.is_zero());
                                }
                                t.pos[idx] = v;
                            }
                        }
                        if !matrix.eval(&interp, &empty)?.is_zero() {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                },
            );
            let found = found.try_reduce(|| false, |a, b| Ok(a || b))?;
            Ok(id.bool(found))
        }
    }
}

#[cfg(test)]
mod tests;
