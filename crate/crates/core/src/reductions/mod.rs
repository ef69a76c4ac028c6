//! Compilers from machines to formulas, from propositional formulas to
//! existential sentences, and the K-string encodings.

pub mod cook;
pub mod encode;
pub mod etk;
pub mod fagin;
pub mod flatten;

pub use cook::{cook_compile, cook_decode_guess, CookArtifact};
pub use encode::{decode_object, encode_object, Object, ObjectKind};
pub use etk::{sat_to_etk, EtkArtifact, EtkFormula, EtkSentence, Term};
pub use fagin::{fagin_compile, fagin_input, fagin_witness_from_trace, FaginArtifact};
pub use flatten::{flatten, is_flat};
