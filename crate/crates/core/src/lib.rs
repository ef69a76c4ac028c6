//! Semiring-valued propositional, first-order and existential second-order
//! logic, BSS machines over semirings, and the formula compilers that connect
//! them.

pub mod error;
pub mod eval;
pub mod logic;
pub mod machine;
pub mod reductions;
pub mod semiring;
pub mod solvers;
pub mod syntax;

pub use error::{Error, Result};
pub use semiring::{SemiringId, Value};
