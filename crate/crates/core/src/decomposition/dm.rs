use std::collections::BTreeSet;

use crate::graph::{maximum_matching, orient, reachable, BipartiteGraph, Direction, Matching, Vertex};

use super::DecompositionError;

/// The three-way partition of a bipartite graph.
///
/// `G1 = (c1, c2)` is well constrained, `G2 = (d1, a2)` over-constrained and
/// `G3 = (a1, d2)` under-constrained. The vertex classes do not depend on the
/// matching; `matching` records the one used to find them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DmDecomposition {
    pub matching: Matching,
    pub c1: BTreeSet<usize>,
    pub c2: BTreeSet<usize>,
    pub d1: BTreeSet<usize>,
    pub a2: BTreeSet<usize>,
    pub a1: BTreeSet<usize>,
    pub d2: BTreeSet<usize>,
    /// Edges induced on G1, G2 and G3.
    pub e1: Vec<(usize, usize)>,
    pub e2: Vec<(usize, usize)>,
    pub e3: Vec<(usize, usize)>,
}

impl DmDecomposition {
    /// Assembles the decomposition from its six classes, computing the
    /// induced edge sets.
    pub(crate) fn from_classes(
        g: &BipartiteGraph,
        matching: Matching,
        [c1, c2, d1, a2, a1, d2]: [BTreeSet<usize>; 6],
    ) -> Self {
        let induced = |ys: &BTreeSet<usize>, xs: &BTreeSet<usize>| -> Vec<(usize, usize)> {
            g.edges().filter(|(y, x)| ys.contains(y) && xs.contains(x)).collect()
        };
        Self {
            e1: induced(&c1, &c2),
            e2: induced(&d1, &a2),
            e3: induced(&a1, &d2),
            matching,
            c1,
            c2,
            d1,
            a2,
            a1,
            d2,
        }
    }

    /// The six classes in the order `c1, c2, d1, a2, a1, d2`.
    pub fn classes(&self) -> [&BTreeSet<usize>; 6] {
        [&self.c1, &self.c2, &self.d1, &self.a2, &self.a1, &self.d2]
    }

    pub fn is_well_constrained(&self) -> bool {
        self.d1.is_empty() && self.a2.is_empty() && self.a1.is_empty() && self.d2.is_empty()
    }

    pub fn has_over_constrained(&self) -> bool {
        !self.d1.is_empty()
    }

    pub fn has_under_constrained(&self) -> bool {
        !self.d2.is_empty()
    }
}

/// DM decomposition using the deterministic Hopcroft–Karp matching.
pub fn dm_decompose(g: &BipartiteGraph) -> DmDecomposition {
    dm_decompose_with(g, maximum_matching(g)).expect("Hopcroft-Karp matching fits its graph")
}

/// DM decomposition from a caller-supplied maximum matching.
///
/// Over-constrained vertices are the descendants of the unsaturated equations
/// in the oriented graph, under-constrained ones the ancestors of the
/// unsaturated unknowns. A matching that is not maximum is rejected.
pub fn dm_decompose_with(g: &BipartiteGraph, m: Matching) -> Result<DmDecomposition, DecompositionError> {
    let dg = orient(g, &m)?;
    let over = reachable(&dg, dg.sources(), Direction::Forward);
    let under = reachable(&dg, dg.sinks(), Direction::Backward);
    // a vertex in both lies on an augmenting path
    if !over.is_disjoint(&under) {
        return Err(DecompositionError::NotMaximum { size: m.size() });
    }

    let mut classes: [BTreeSet<usize>; 6] = Default::default();
    for y in 0..g.equation_count() {
        let v = Vertex::Equation(y);
        let slot = if over.contains(&v) {
            2
        } else if under.contains(&v) {
            4
        } else {
            0
        };
        classes[slot].insert(y);
    }
    for x in 0..g.unknown_count() {
        let v = Vertex::Unknown(x);
        let slot = if over.contains(&v) {
            3
        } else if under.contains(&v) {
            5
        } else {
            1
        };
        classes[slot].insert(x);
    }
    Ok(DmDecomposition::from_classes(g, m, classes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn four_by_four_example() {
        // e1v1, e2v2, e3v2, e4v3, e4v4 (zero-based)
        let g = BipartiteGraph::from_edges(4, 4, &[(0, 0), (1, 1), (2, 1), (3, 2), (3, 3)]).unwrap();
        let dm = dm_decompose(&g);
        assert_eq!((dm.c1.clone(), dm.c2.clone()), (set(&[0]), set(&[0])));
        assert_eq!((dm.d1.clone(), dm.a2.clone()), (set(&[1, 2]), set(&[1])));
        assert_eq!((dm.a1.clone(), dm.d2.clone()), (set(&[3]), set(&[2, 3])));
        assert_eq!(dm.e2, vec![(1, 1), (2, 1)]);
    }

    #[test]
    fn empty_graph_has_empty_parts() {
        let g = BipartiteGraph::from_edges(0, 0, &[]).unwrap();
        let dm = dm_decompose(&g);
        assert!(dm.classes().iter().all(|c| c.is_empty()));
        assert!(dm.is_well_constrained());
    }

    #[test]
    fn isolated_vertices() {
        let g = BipartiteGraph::from_edges(2, 2, &[(0, 0)]).unwrap();
        let dm = dm_decompose(&g);
        assert_eq!(dm.d1, set(&[1]));
        assert_eq!(dm.d2, set(&[1]));
        assert_eq!(dm.c1, set(&[0]));
    }

    #[test]
    fn rejects_non_maximum_matching() {
        let g = BipartiteGraph::from_edges(1, 1, &[(0, 0)]).unwrap();
        assert_eq!(
            dm_decompose_with(&g, Matching::empty(1, 1)),
            Err(DecompositionError::NotMaximum { size: 0 })
        );
    }

    #[test]
    fn rejects_foreign_matching() {
        let g = BipartiteGraph::from_edges(1, 2, &[(0, 0)]).unwrap();
        let h = BipartiteGraph::from_edges(1, 2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(&h, &[(0, 1)]).unwrap();
        assert!(dm_decompose_with(&g, m).is_err());
    }
}
