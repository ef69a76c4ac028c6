//! Well-formedness checks for the side conditions of the three grammars.

use std::collections::BTreeSet;

use super::{ESOSentence, FOFormula, PLFormula, Vocabulary};
use crate::error::{Error, Result};
use crate::semiring::SemiringProfile;

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Validation(msg))
}

fn check_const(profile: &SemiringProfile, v: &crate::semiring::Value) -> Result<()> {
    if v.id() != profile.id {
        return fail(format!(
            "constant {v} belongs to {}, formula is over {}",
            v.id(),
            profile.id
        ));
    }
    v.check_invariants()
}

/// Rejects foreign constants and order comparisons over unordered profiles.
pub fn validate_pl(f: &PLFormula, profile: &SemiringProfile) -> Result<()> {
    match f {
        PLFormula::Const(v) => check_const(profile, v)?,
        PLFormula::Leq(..) | PLFormula::NotLeq(..) if !profile.ordered => {
            return fail(format!("order comparison over unordered semiring {}", profile.id))
        }
        _ => {}
    }
    f.children()
        .into_iter()
        .try_for_each(|c| validate_pl(c, profile))
}

fn validate_fo_in(
    f: &FOFormula,
    profile: &SemiringProfile,
    vocab: &Vocabulary,
    bound: &mut Vec<String>,
) -> Result<()> {
    match f {
        FOFormula::Const(v) => check_const(profile, v)?,
        FOFormula::Leq(..) | FOFormula::NotLeq(..) if !profile.ordered => {
            return fail(format!("order comparison over unordered semiring {}", profile.id))
        }
        FOFormula::Atom(r, xs) | FOFormula::NegAtom(r, xs) => match vocab.get(r) {
            None => return fail(format!("relation {r} is not in the vocabulary")),
            Some(&ar) if ar != xs.len() => {
                return fail(format!(
                    "arity mismatch: {r} has arity {ar}, used with {} arguments",
                    xs.len()
                ))
            }
            _ => {}
        },
        FOFormula::Exists(x, a) | FOFormula::Forall(x, a) => {
            bound.push(x.clone());
            let r = validate_fo_in(a, profile, vocab, bound);
            bound.pop();
            return r;
        }
        _ => {}
    }
    f.children()
        .into_iter()
        .try_for_each(|c| validate_fo_in(c, profile, vocab, bound))
}

/// Checks arities against `vocab` and the order flag of `profile`.
pub fn validate_fo(f: &FOFormula, profile: &SemiringProfile, vocab: &Vocabulary) -> Result<()> {
    validate_fo_in(f, profile, vocab, &mut Vec::new())
}

/// Checks the prefix against the base vocabulary and the matrix against
/// their union; the matrix must be a sentence.
pub fn validate_eso(s: &ESOSentence, profile: &SemiringProfile, base: &Vocabulary) -> Result<()> {
    let mut vocab = base.clone();
    let mut seen = BTreeSet::new();
    for (r, ar) in &s.prefix {
        if base.contains_key(r) {
            return fail(format!("quantified relation {r} is in the base vocabulary"));
        }
        if !seen.insert(r.clone()) {
            return fail(format!("relation {r} quantified twice"));
        }
        vocab.insert(r.clone(), *ar);
    }
    validate_fo(&s.matrix, profile, &vocab)?;
    let fv = s.matrix.free_vars();
    if !fv.is_empty() {
        let names: Vec<_> = fv.into_iter().collect();
        return fail(format!("free variables in sentence: {}", names.join(", ")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::{SemiringId, Value};

    #[test]
    fn leq_needs_an_order() {
        let f = PLFormula::leq(PLFormula::prop("p"), PLFormula::prop("q"));
        let ordered = SemiringProfile::of(SemiringId::NaturalPolynomial);
        assert!(validate_pl(&f, &ordered).is_ok());
        let bare = SemiringProfile::unordered(SemiringId::NaturalPolynomial);
        assert!(validate_pl(&f, &bare).is_err());
    }

    #[test]
    fn arity_mismatch() {
        let vocab: Vocabulary = [("R".to_string(), 3)].into_iter().collect();
        let f = FOFormula::atom("R", &["x", "y"]);
        let err = validate_fo(&f, &SemiringProfile::of(SemiringId::Natural), &vocab).unwrap_err();
        assert!(err.to_string().contains("arity"));
    }

    #[test]
    fn foreign_constant() {
        let f = PLFormula::Const(Value::Bool(true));
        assert!(validate_pl(&f, &SemiringProfile::of(SemiringId::Natural)).is_err());
    }

    #[test]
    fn eso_sentence_checks() {
        let p = SemiringProfile::of(SemiringId::Natural);
        let ok = ESOSentence {
            prefix: vec![("P".into(), 1)],
            matrix: FOFormula::exists("x", FOFormula::atom("P", &["x"])),
        };
        assert!(validate_eso(&ok, &p, &Vocabulary::new()).is_ok());
        let free = ESOSentence {
            prefix: vec![("P".into(), 1)],
            matrix: FOFormula::atom("P", &["x"]),
        };
        assert!(validate_eso(&free, &p, &Vocabulary::new()).is_err());
        let base: Vocabulary = [("P".to_string(), 1)].into_iter().collect();
        assert!(validate_eso(&ok, &p, &base).is_err());
    }
}
