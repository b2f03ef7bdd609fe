//! Dulmage–Mendelsohn partition into well-, over- and under-constrained
//! parts, irreducible decomposition of the well-constrained part, and the
//! resolution plan built from both.
//!
//! The brute-force oracles in [`oracle`] enumerate matchings explicitly and
//! exist to cross-check the polynomial algorithms on small graphs.

mod dm;
mod irreducible;
pub mod oracle;
mod plan;

pub use dm::{dm_decompose, dm_decompose_with, DmDecomposition};
pub use irreducible::{irreducible_decomposition, IrreducibleBlock};
pub use oracle::{dm_bruteforce_oracle, is_irreducible_bruteforce};
pub use plan::{classify, resolution_plan, Diagnosis, Part, PartKind, ResolutionPlan, Verdict};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("matching saturates {matched} of {equations} equations and {unknowns} unknowns; a perfect matching is required")]
    NotPerfect {
        matched: usize,
        equations: usize,
        unknowns: usize,
    },
    #[error("matching of size {size} is not maximum")]
    NotMaximum { size: usize },
    #[error("brute-force oracle refuses graphs with {size} {what} (limit {limit})")]
    OracleTooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
}
