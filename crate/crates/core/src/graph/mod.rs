//! Bipartite equation/unknown graphs and the directed-graph machinery used
//! to decompose them: maximum matching, orientation, strongly connected
//! components, reachability and topological ordering.

mod bipartite;
mod matching;
mod oriented;
mod scc;

pub use bipartite::{BipartiteGraph, Subgraph};
pub use matching::{maximum_matching, Matching};
pub use oriented::{orient, reachable, Direction, OrientedGraph};
pub use scc::{strongly_connected_components, topological_order, Condensation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A vertex of the bipartite graph, tagged by side.
///
/// Equations order before unknowns; within a side, by index. This is the
/// "smallest vertex ID" used for every deterministic tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    Equation(usize),
    Unknown(usize),
}

impl Vertex {
    pub fn equation(self) -> Option<usize> {
        match self {
            Vertex::Equation(i) => Some(i),
            Vertex::Unknown(_) => None,
        }
    }

    pub fn unknown(self) -> Option<usize> {
        match self {
            Vertex::Unknown(j) => Some(j),
            Vertex::Equation(_) => None,
        }
    }
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Vertex::Equation(i) => write!(f, "y{i}"),
            Vertex::Unknown(j) => write!(f, "x{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("equation {equation} references unknown {unknown}, but only {unknown_count} unknowns exist")]
    UnknownOutOfRange {
        equation: usize,
        unknown: usize,
        unknown_count: usize,
    },
    #[error("occurrence list names equation {equation}, but only {equation_count} equations exist")]
    EquationOutOfRange { equation: usize, equation_count: usize },
    #[error("matching pair (y{equation}, x{unknown}) is not an edge of the graph")]
    NotAnEdge { equation: usize, unknown: usize },
    #[error("matching does not fit the graph: {0}")]
    MatchingShape(String),
    #[error("condensation contains a cycle")]
    Cycle,
}
