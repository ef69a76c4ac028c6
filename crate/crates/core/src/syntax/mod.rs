//! Text formats: formulas, machine listings, assignment and interpretation
//! files. Every printer's output parses back to the same value.

mod files;
mod formula;
mod lex;
mod machine;

pub use files::{parse_valuation, Valuation};
pub use formula::{parse_eso, parse_fo, parse_pl};
pub use machine::parse_machine;

/// Words that cannot name propositions, relations or variables.
pub const KEYWORDS: [&str; 6] = ["exists", "forall", "EXISTS", "not", "and", "or"];
