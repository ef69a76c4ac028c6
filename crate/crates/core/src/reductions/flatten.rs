//! Removal of nested comparisons.
//!
//! A formula is only ever tested for being nonzero, so it can be replaced
//! by any formula that is nonzero on exactly the same assignments. `nz(φ)`
//! builds such a formula and `z(φ)` one that is nonzero exactly where φ is
//! zero. Both push through the connectives using positivity (a·b ≠ 0 iff
//! a ≠ 0 and b ≠ 0, a+b ≠ 0 iff a ≠ 0 or b ≠ 0) and stop at comparisons
//! between plain terms. A comparison whose operand is itself Boolean-level
//! is supported when the other operand is the constant 0, which covers both
//! the sugar connectives and their desugared forms.

use crate::error::{Error, Result};
use crate::logic::PLFormula;
use crate::semiring::SemiringId;

/// True if no comparison occurs below a comparison. The Boolean
/// connectives count as the nested comparisons they abbreviate, so a flat
/// formula has none.
pub fn is_flat(f: &PLFormula) -> bool {
    use PLFormula as P;
    match f {
        P::BAnd(..) | P::BOr(..) | P::BImp(..) | P::BNot(..) => false,
        _ if f.is_comparison() => f.children().into_iter().all(is_term),
        _ => f.children().into_iter().all(is_flat),
    }
}

fn is_term(f: &PLFormula) -> bool {
    match f {
        PLFormula::Prop(_) | PLFormula::NegProp(_) | PLFormula::Const(_) => true,
        PLFormula::And(a, b) | PLFormula::Or(a, b) => is_term(a) && is_term(b),
        _ => false,
    }
}

fn is_zero_const(f: &PLFormula) -> bool {
    matches!(f, PLFormula::Const(c) if c.is_zero())
}

struct Flat {
    id: SemiringId,
}

impl Flat {
    fn zero(&self) -> PLFormula {
        PLFormula::Const(self.id.zero())
    }

    /// For `a ⋈ 0` with a Boolean-level `a`, the operand and the side on
    /// which it sits.
    fn against_zero<'a>(&self, a: &'a PLFormula, b: &'a PLFormula) -> Result<&'a PLFormula> {
        if is_zero_const(b) {
            Ok(a)
        } else if is_zero_const(a) {
            Ok(b)
        } else {
            Err(Error::UnsupportedNesting(format!(
                "comparison of {a:?} with {b:?}: a nested comparison must be compared with 0"
            )))
        }
    }

    fn nz(&self, f: &PLFormula) -> Result<PLFormula> {
        use PLFormula as P;
        Ok(match f {
            P::Prop(_) | P::NegProp(_) | P::Const(_) => f.clone(),
            P::And(a, b) | P::BAnd(a, b) => P::and(self.nz(a)?, self.nz(b)?),
            P::Or(a, b) | P::BOr(a, b) => P::or(self.nz(a)?, self.nz(b)?),
            P::BImp(a, b) => P::or(self.z(a)?, self.nz(b)?),
            P::BNot(a) => self.z(a)?,
            _ if is_flat(f) => f.clone(),
            P::Eq(a, b) => self.z(self.against_zero(a, b)?)?,
            P::Leq(a, b) if is_zero_const(b) => self.z(a)?,
            P::Neq(a, b) => self.nz(self.against_zero(a, b)?)?,
            P::NotLeq(a, b) if is_zero_const(b) => self.nz(a)?,
            _ => return Err(unsupported(f)),
        })
    }

    fn z(&self, f: &PLFormula) -> Result<PLFormula> {
        use PLFormula as P;
        Ok(match f {
            P::Prop(_) | P::NegProp(_) => P::eq(f.clone(), self.zero()),
            P::Const(c) => P::Const(self.id.bool(c.is_zero())),
            P::And(a, b) | P::BAnd(a, b) => P::or(self.z(a)?, self.z(b)?),
            P::Or(a, b) | P::BOr(a, b) => P::and(self.z(a)?, self.z(b)?),
            P::BImp(a, b) => P::and(self.nz(a)?, self.z(b)?),
            P::BNot(a) => self.nz(a)?,
            P::Eq(a, b) if is_flat(f) => P::neq(*a.clone(), *b.clone()),
            P::Neq(a, b) if is_flat(f) => P::eq(*a.clone(), *b.clone()),
            P::Leq(a, b) if is_flat(f) => P::not_leq(*a.clone(), *b.clone()),
            P::NotLeq(a, b) if is_flat(f) => P::leq(*a.clone(), *b.clone()),
            P::Eq(a, b) => self.nz(self.against_zero(a, b)?)?,
            P::Leq(a, b) if is_zero_const(b) => self.nz(a)?,
            P::Neq(a, b) => self.z(self.against_zero(a, b)?)?,
            P::NotLeq(a, b) if is_zero_const(b) => self.z(a)?,
            _ => return Err(unsupported(f)),
        })
    }
}

fn unsupported(f: &PLFormula) -> Error {
    Error::UnsupportedNesting(format!("{f:?}"))
}

/// An equisatisfiable formula over `id` without nested comparisons.
///
/// `X ≤ 0` is read as `X = 0`, which holds because 0 is the least element
/// in every ordered semiring supported here.
pub fn flatten(f: &PLFormula, id: SemiringId) -> Result<PLFormula> {
    if let Some(c) = f.constants().into_iter().find(|c| c.id() != id) {
        return Err(Error::SemiringMismatch {
            left: id,
            right: c.id(),
        });
    }
    if is_flat(f) {
        return Ok(f.clone());
    }
    let out = Flat { id }.nz(f)?;
    debug_assert!(is_flat(&out));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::desugar_pl;
    use crate::semiring::Value;

    const NAT: SemiringId = SemiringId::Natural;

    fn p(x: &str) -> PLFormula {
        PLFormula::prop(x)
    }

    fn c(n: u32) -> PLFormula {
        PLFormula::Const(Value::nat(n))
    }

    #[test]
    fn implication_of_comparisons() {
        let f = PLFormula::bimp(PLFormula::eq(p("p"), c(0)), PLFormula::leq(p("q"), c(2)));
        let want = PLFormula::or(PLFormula::neq(p("p"), c(0)), PLFormula::leq(p("q"), c(2)));
        assert_eq!(flatten(&f, NAT).unwrap(), want);
    }

    #[test]
    fn flat_is_a_fixpoint() {
        let f = PLFormula::and(p("p"), PLFormula::eq(p("q"), c(1)));
        assert_eq!(flatten(&f, NAT).unwrap(), f);
    }

    #[test]
    fn desugared_shapes_are_recognised() {
        let f = PLFormula::bimp(
            PLFormula::not_leq(p("p"), c(2)),
            PLFormula::bor(PLFormula::neg_prop("q"), PLFormula::band(c(1), p("r"))),
        );
        let d = desugar_pl(&f, NAT);
        assert!(!is_flat(&d));
        assert!(is_flat(&flatten(&d, NAT).unwrap()));
        assert!(is_flat(&flatten(&f, NAT).unwrap()));
    }

    #[test]
    fn arbitrary_nesting_is_rejected() {
        let f = PLFormula::eq(PLFormula::eq(p("p"), c(1)), c(1));
        assert!(matches!(flatten(&f, NAT), Err(Error::UnsupportedNesting(_))));
        let g = PLFormula::leq(c(1), PLFormula::eq(p("p"), p("q")));
        assert!(matches!(flatten(&g, NAT), Err(Error::UnsupportedNesting(_))));
    }
}
