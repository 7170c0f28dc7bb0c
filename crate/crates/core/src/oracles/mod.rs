//! Brute-force ground truth for the structural algorithms, usable only on
//! small graphs.

pub mod colour;
pub mod cwd;
pub mod patterns;
pub mod three_clique;

use thiserror::Error;

use crate::cw::term::TermError;

pub use colour::{
    chromatic_number_exact, chromatic_via_simplicial, color_via_term, simplicial_eliminate,
    Colouring, Elimination, DEFAULT_STATE_BUDGET,
};
pub use cwd::{brute_cwd_at_most, min_cwd, CwdDecision};
pub use patterns::naive_pattern_oracle;
pub use three_clique::monotone_3clique_partition_exists;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what}: n = {n} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("clique-width oracle handles at most {limit} labels, asked for {c}")]
    TooManyLabels { c: usize, limit: usize },
    #[error("colouring DP exceeded its budget of {budget} states")]
    StateBudget { budget: usize },
    #[error(transparent)]
    Term(#[from] TermError),
}
