//! Clique-width expressions: the stack-machine representation, and the
//! greedy peel that turns a partition with the hereditary extreme vertex
//! property into an expression with one label per part plus one.

pub mod peel;
pub mod term;

pub use peel::{build_term, peel, BuildError, PeelCertificate, PeelOutcome, PeelStep};
pub use term::{eval_term, verify_term, CwOp, CwTerm, LabelledGraph, TermCheck, TermError};
