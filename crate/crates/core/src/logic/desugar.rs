//! Rewrites surface connectives into core syntax.
//!
//! ¬_Bφ ↦ (φ = 0), φ ∨_B ψ ↦ (φ≠0 ∨ ψ≠0) ≠ 0, φ ∧_B ψ ↦ (φ≠0 ∧ ψ≠0) ≠ 0,
//! φ →_B ψ ↦ (φ=0 ∨ ψ≠0) ≠ 0, φ ≠ ψ ↦ (φ = ψ) = 0, φ ≰ ψ ↦ (φ ≤ ψ) ≤ 0.

use super::{FOFormula, PLFormula};
use crate::semiring::SemiringId;

macro_rules! desugar_impl {
    ($name:ident, $t:ident, $f:ident, $($leaf:pat => $same:expr),* ; $($binder:ident),*) => {
        /// Returns an equivalent formula containing only core node kinds.
        pub fn $name($f: &$t, semiring: SemiringId) -> $t {
            let zero = || $t::Const(semiring.zero());
            let neq0 = |a: $t| $t::eq($t::eq(a, zero()), zero());
            let go = |a: &$t| $name(a, semiring);
            match $f {
                $($leaf => $same,)*
                $t::And(a, b) => $t::and(go(a), go(b)),
                $t::Or(a, b) => $t::or(go(a), go(b)),
                $t::Eq(a, b) => $t::eq(go(a), go(b)),
                $t::Leq(a, b) => $t::leq(go(a), go(b)),
                $t::Neq(a, b) => $t::eq($t::eq(go(a), go(b)), zero()),
                $t::NotLeq(a, b) => $t::leq($t::leq(go(a), go(b)), zero()),
                $t::BNot(a) => $t::eq(go(a), zero()),
                $t::BOr(a, b) => neq0($t::or(neq0(go(a)), neq0(go(b)))),
                $t::BAnd(a, b) => neq0($t::and(neq0(go(a)), neq0(go(b)))),
                $t::BImp(a, b) => neq0($t::or($t::eq(go(a), zero()), neq0(go(b)))),
                $($t::$binder(x, a) => $t::$binder(x.clone(), Box::new(go(a))),)*
            }
        }
    };
}

desugar_impl!(desugar_pl, PLFormula, f,
    PLFormula::Prop(_) | PLFormula::NegProp(_) | PLFormula::Const(_) => f.clone()
    ;);

desugar_impl!(desugar_fo, FOFormula, f,
    FOFormula::VarEq(..) | FOFormula::VarNeq(..) | FOFormula::Const(_)
        | FOFormula::Atom(..) | FOFormula::NegAtom(..) => f.clone()
    ; Exists, Forall);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Value;

    fn c(n: u32) -> PLFormula {
        PLFormula::Const(Value::nat(n))
    }

    #[test]
    fn boolean_negation() {
        let f = PLFormula::bnot(PLFormula::prop("p"));
        let d = desugar_pl(&f, SemiringId::Natural);
        assert_eq!(d, PLFormula::eq(PLFormula::prop("p"), c(0)));
    }

    #[test]
    fn core_is_a_fixpoint() {
        let f = PLFormula::and(PLFormula::prop("p"), PLFormula::prop("q"));
        assert_eq!(desugar_pl(&f, SemiringId::Natural), f);
    }

    #[test]
    fn inequality_shortcut() {
        let f = PLFormula::neq(PLFormula::prop("p"), PLFormula::prop("q"));
        let want = PLFormula::eq(PLFormula::eq(PLFormula::prop("p"), PLFormula::prop("q")), c(0));
        assert_eq!(desugar_pl(&f, SemiringId::Natural), want);
    }

    #[test]
    fn idempotent_and_core() {
        let f = PLFormula::bimp(
            PLFormula::not_leq(PLFormula::prop("p"), c(2)),
            PLFormula::bor(PLFormula::neg_prop("q"), PLFormula::band(c(1), PLFormula::prop("r"))),
        );
        let once = desugar_pl(&f, SemiringId::Natural);
        assert!(once.is_core());
        assert_eq!(desugar_pl(&once, SemiringId::Natural), once);
    }

    #[test]
    fn fo_binders_are_kept() {
        let f = FOFormula::exists("x", FOFormula::bnot(FOFormula::atom("R", &["x"])));
        let d = desugar_fo(&f, SemiringId::Boolean);
        assert_eq!(
            d,
            FOFormula::exists(
                "x",
                FOFormula::eq(FOFormula::atom("R", &["x"]), FOFormula::Const(Value::Bool(false)))
            )
        );
    }
}
