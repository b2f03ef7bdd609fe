use std::collections::BTreeSet;

use crate::graph::{orient, strongly_connected_components, BipartiteGraph, Condensation, Matching};

use super::DecompositionError;

/// One irreducible, square subsystem: a strongly connected component of the
/// oriented graph of a perfectly matched graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibleBlock {
    pub equations: BTreeSet<usize>,
    pub unknowns: BTreeSet<usize>,
    /// The perfect matching restricted to the block, in equation order.
    pub matching: Vec<(usize, usize)>,
}

impl IrreducibleBlock {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// Edges of `g` with both endpoints in the block.
    pub fn edges<'a>(&'a self, g: &'a BipartiteGraph) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.equations.iter().flat_map(move |&y| {
            g.unknowns_of(y)
                .iter()
                .filter(|x| self.unknowns.contains(x))
                .map(move |&x| (y, x))
        })
    }
}

/// Splits a perfectly matched graph into its irreducible blocks.
///
/// Blocks are the strongly connected components of the oriented graph, in
/// the same order as the returned condensation's components (a valid
/// dependency-first order). Edges joining different blocks are exactly the
/// edges that belong to no perfect matching.
pub fn irreducible_decomposition(
    g: &BipartiteGraph,
    perfect: &Matching,
) -> Result<(Vec<IrreducibleBlock>, Condensation), DecompositionError> {
    perfect.validate(g)?;
    if !perfect.is_perfect() {
        return Err(DecompositionError::NotPerfect {
            matched: perfect.size(),
            equations: g.equation_count(),
            unknowns: g.unknown_count(),
        });
    }
    let dg = orient(g, perfect)?;
    let condensation = strongly_connected_components(&dg);
    let blocks = condensation
        .components
        .iter()
        .map(|members| {
            let equations: BTreeSet<usize> = members.iter().filter_map(|v| v.equation()).collect();
            let unknowns: BTreeSet<usize> = members.iter().filter_map(|v| v.unknown()).collect();
            let matching = equations
                .iter()
                .map(|&y| (y, perfect.pair_of_equation(y).expect("perfect matching")))
                .collect();
            IrreducibleBlock {
                equations,
                unknowns,
                matching,
            }
        })
        .collect();
    Ok((blocks, condensation))
}
