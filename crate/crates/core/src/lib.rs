//! A condensed-detachment prover for Hilbert-style propositional calculi.
pub mod corpus;
pub mod formula;
pub mod par;
pub mod proof;
pub mod search;
pub mod unify;

pub use formula::{parse_formula, Formula, Symbol, Term, Var, View};
pub use par::Parallelism;
pub use unify::{apply, common_instance_size, condensed_detach, match_onto, mgu, Substitution};
