//! Interval Newton (Krawczyk) branch-and-prune solving, block by block.

mod block;
mod execute;
mod linalg;

pub use block::{
    krawczyk_step, solve_block, BlockProblem, BlockSolution, Bindings, IntervalBox, StepOutcome,
};
pub use execute::{execute_plan, execute_plan_observed, solve_monolithic, SystemSolution};
pub use linalg::invert;

use thiserror::Error;

use crate::scalar::Scalar;
use crate::system::VarRef;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Boxes narrower than this in every coordinate are final.
    pub tol_width: T,
    /// Largest accepted |f_i| for uncertified solutions and discarded equations.
    pub tol_residual: T,
    /// Boxes processed per block before giving up.
    pub max_boxes: usize,
}

impl<T: Scalar> Default for SolverConfig<T> {
    /// `1e-8` / `1e-6` / `1e6`, raised to what the precision can reach.
    fn default() -> Self {
        Self {
            tol_width: T::lit(1e-8).max(T::epsilon() * T::lit(64.0)),
            tol_residual: T::lit(1e-6).max(T::epsilon() * T::lit(1024.0)),
            max_boxes: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("system is structural-only and cannot be solved numerically")]
    StructuralOnly,
    #[error("system is not square: {equations} equations, {unknowns} unknowns")]
    NotSquare { equations: usize, unknowns: usize },
    #[error("box has {found} coordinates, block has {expected} unknowns")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("initial box must be nonempty and finite")]
    InvalidBox,
    #[error("variables without a value: {0:?}")]
    UnboundVariables(Vec<VarRef>),
    #[error("free parameters need a value: {}", .0.join(", "))]
    UnboundParameters(Vec<String>),
    #[error("`{0}` is neither a parameter nor a free unknown")]
    NotOverridable(String),
    #[error("box budget of {limit} exceeded with {pending} boxes unresolved in {region:?}")]
    BudgetExceeded {
        limit: usize,
        pending: usize,
        /// Hull of the unresolved boxes, per block unknown.
        region: Vec<(f64, f64)>,
    },
}
