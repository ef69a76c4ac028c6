//! Bounded search oracles: satisfiability, ETK truth and sampled
//! K-equivalence.

mod sat;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::eval_fo;
use crate::logic::{FOAssignment, FOFormula, KInterpretation, PLAssignment};
use crate::reductions::etk::EtkSentence;
use crate::semiring::{SemiringId, Value};

pub use sat::sat_bruteforce;

/// Default cap on search nodes or candidates.
pub const DEFAULT_MAX_CANDIDATES: u128 = 50_000_000;

/// A finite universe of values and a cap on the work spent searching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    pub universe: Vec<Value>,
    pub max_candidates: u128,
}

impl SearchBudget {
    pub fn new(universe: Vec<Value>, max_candidates: u128) -> Result<SearchBudget> {
        let b = SearchBudget {
            universe,
            max_candidates,
        };
        b.semiring()?;
        Ok(b)
    }

    /// The per-semiring default universe with the default cap.
    pub fn default_for(id: SemiringId) -> SearchBudget {
        SearchBudget {
            universe: id.default_universe(),
            max_candidates: DEFAULT_MAX_CANDIDATES,
        }
    }

    /// Checks the invariants and returns the universe's semiring.
    pub fn semiring(&self) -> Result<SemiringId> {
        let Some(first) = self.universe.first() else {
            return Err(Error::Validation("search universe is empty".into()));
        };
        let id = first.id();
        if let Some(v) = self.universe.iter().find(|v| v.id() != id) {
            return Err(Error::SemiringMismatch {
                left: id,
                right: v.id(),
            });
        }
        if !self.universe.contains(&id.zero()) || !self.universe.contains(&id.one()) {
            return Err(Error::Validation(
                "search universe must contain 0 and 1".into(),
            ));
        }
        if self.max_candidates == 0 {
            return Err(Error::Validation("candidate cap must be positive".into()));
        }
        Ok(id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Satisfied(PLAssignment),
    NoneWithinBounds,
}

impl SatOutcome {
    pub fn assignment(&self) -> Option<&PLAssignment> {
        match self {
            SatOutcome::Satisfied(s) => Some(s),
            SatOutcome::NoneWithinBounds => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EtkOutcome {
    /// A satisfying valuation, in the sentence's variable order.
    True(Vec<(String, Value)>),
    FalseWithinBounds,
}

/// Searches valuations of the sentence's variables over the universe,
/// odometer order with the last variable fastest.
pub fn etk_bounded(theta: &EtkSentence, budget: &SearchBudget) -> Result<EtkOutcome> {
    let id = budget.semiring()?;
    let u = &budget.universe;
    let k = theta.vars.len();
    let mut needed: u128 = 1;
    for _ in 0..k {
        needed = needed.saturating_mul(u.len() as u128);
    }
    if needed > budget.max_candidates {
        return Err(Error::BoundExceeded {
            needed,
            cap: budget.max_candidates,
        });
    }
    let radix = u.len() as u64;
    let decode = |mut idx: u64| -> Vec<Value> {
        let mut vals = vec![id.zero(); k];
        for slot in vals.iter_mut().rev() {
            *slot = u[(idx % radix) as usize].clone();
            idx /= radix;
        }
        vals
    };
    let hit = (0..needed as u64)
        .into_par_iter()
        .map(|idx| {
            let vals = decode(idx);
            theta.holds(id, &vals).map(|h| h.then_some(vals))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match hit {
        Some(Ok(Some(vals))) => Ok(EtkOutcome::True(
            theta.vars.iter().cloned().zip(vals).collect(),
        )),
        Some(Err(e)) => Err(e),
        _ => Ok(EtkOutcome::FalseWithinBounds),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    EquivalentOnSamples,
    /// Index into the samples with the two differing values.
    Counterexample {
        index: usize,
        left: Value,
        right: Value,
    },
}

/// Compares ⟦φ⟧_π and ⟦ψ⟧_π on each sample, stopping at the first
/// difference.
pub fn k_equivalence_sample(
    phi: &FOFormula,
    psi: &FOFormula,
    samples: &[KInterpretation],
) -> Result<Equivalence> {
    let s = FOAssignment::new();
    for (index, pi) in samples.iter().enumerate() {
        let left = eval_fo(phi, pi, &s)?;
        let right = eval_fo(psi, pi, &s)?;
        if left != right {
            return Ok(Equivalence::Counterexample { index, left, right });
        }
    }
    Ok(Equivalence::EquivalentOnSamples)
}
