use std::collections::{BTreeSet, VecDeque};

use super::{GraphError, Vertex};

/// Equation/unknown incidence graph.
///
/// Equations are the `Y` side, unknowns the `X` side. Both are dense indices
/// in input order and every neighbor list is sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    equation_adj: Vec<Vec<usize>>,
    unknown_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    /// Builds a graph from per-equation occurrence lists. Repeated unknowns
    /// collapse into one edge; equations missing from `occurrences` are isolated.
    pub fn build<I, U>(
        equation_count: usize,
        unknown_count: usize,
        occurrences: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, U)>,
        U: IntoIterator<Item = usize>,
    {
        let mut equation_adj = vec![Vec::new(); equation_count];
        for (equation, unknowns) in occurrences {
            if equation >= equation_count {
                return Err(GraphError::EquationOutOfRange {
                    equation,
                    equation_count,
                });
            }
            for unknown in unknowns {
                if unknown >= unknown_count {
                    return Err(GraphError::UnknownOutOfRange {
                        equation,
                        unknown,
                        unknown_count,
                    });
                }
                equation_adj[equation].push(unknown);
            }
        }
        Ok(Self::from_adjacency(equation_adj, unknown_count))
    }

    /// Builds from an explicit edge list `(equation, unknown)`.
    pub fn from_edges(
        equation_count: usize,
        unknown_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        Self::build(
            equation_count,
            unknown_count,
            edges.iter().map(|&(y, x)| (y, std::iter::once(x))),
        )
    }

    fn from_adjacency(mut equation_adj: Vec<Vec<usize>>, unknown_count: usize) -> Self {
        let mut unknown_adj = vec![Vec::new(); unknown_count];
        for (y, adj) in equation_adj.iter_mut().enumerate() {
            adj.sort_unstable();
            adj.dedup();
            for &x in adj.iter() {
                unknown_adj[x].push(y);
            }
        }
        // equations are visited in increasing order, so unknown lists are sorted
        Self {
            equation_adj,
            unknown_adj,
        }
    }

    pub fn equation_count(&self) -> usize {
        self.equation_adj.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_adj.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.equation_count() + self.unknown_count()
    }

    pub fn edge_count(&self) -> usize {
        self.equation_adj.iter().map(Vec::len).sum()
    }

    /// Unknowns occurring in equation `y`, sorted.
    pub fn unknowns_of(&self, y: usize) -> &[usize] {
        &self.equation_adj[y]
    }

    /// Equations in which unknown `x` occurs, sorted.
    pub fn equations_of(&self, x: usize) -> &[usize] {
        &self.unknown_adj[x]
    }

    pub fn has_edge(&self, y: usize, x: usize) -> bool {
        self.equation_adj
            .get(y)
            .is_some_and(|adj| adj.binary_search(&x).is_ok())
    }

    /// All edges in lexicographic `(equation, unknown)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.equation_adj
            .iter()
            .enumerate()
            .flat_map(|(y, adj)| adj.iter().map(move |&x| (y, x)))
    }

    /// Neighborhood `Γ(Z)` of a set of equations.
    pub fn neighborhood<'a>(&self, equations: impl IntoIterator<Item = &'a usize>) -> BTreeSet<usize> {
        equations
            .into_iter()
            .flat_map(|&y| self.equation_adj[y].iter().copied())
            .collect()
    }

    /// Subgraph induced by the given equations and unknowns, relabeled densely
    /// in increasing ID order.
    pub fn induced(&self, equations: &BTreeSet<usize>, unknowns: &BTreeSet<usize>) -> Subgraph {
        let equations: Vec<usize> = equations.iter().copied().collect();
        let unknowns: Vec<usize> = unknowns.iter().copied().collect();
        let mut local_unknown = vec![usize::MAX; self.unknown_count()];
        for (l, &x) in unknowns.iter().enumerate() {
            local_unknown[x] = l;
        }
        let adj = equations
            .iter()
            .map(|&y| {
                self.equation_adj[y]
                    .iter()
                    .filter(|&&x| local_unknown[x] != usize::MAX)
                    .map(|&x| local_unknown[x])
                    .collect()
            })
            .collect();
        Subgraph {
            graph: Self::from_adjacency(adj, unknowns.len()),
            equations,
            unknowns,
        }
    }

    /// Connected components of the subgraph induced by the given vertices,
    /// each as sorted `(equations, unknowns)`, ordered by smallest vertex.
    pub fn connected_components_within(
        &self,
        equations: &BTreeSet<usize>,
        unknowns: &BTreeSet<usize>,
    ) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        let sub = self.induced(equations, unknowns);
        sub.graph
            .connected_components()
            .into_iter()
            .map(|(ys, xs)| {
                (
                    ys.into_iter().map(|y| sub.equations[y]).collect(),
                    xs.into_iter().map(|x| sub.unknowns[x]).collect(),
                )
            })
            .collect()
    }

    /// Connected components as sorted `(equations, unknowns)`, ordered by
    /// smallest vertex (equations before unknowns).
    pub fn connected_components(&self) -> Vec<(BTreeSet<usize>, BTreeSet<usize>)> {
        let ny = self.equation_count();
        let mut seen = vec![false; self.vertex_count()];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let (mut ys, mut xs) = (BTreeSet::new(), BTreeSet::new());
            while let Some(v) = queue.pop_front() {
                let next: &[usize] = if v < ny {
                    ys.insert(v);
                    &self.equation_adj[v]
                } else {
                    xs.insert(v - ny);
                    &self.unknown_adj[v - ny]
                };
                for &w in next {
                    let w = if v < ny { ny + w } else { w };
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push((ys, xs));
        }
        out
    }
}

/// An induced subgraph together with the maps from local to parent IDs.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: BipartiteGraph,
    /// `equations[local] = parent equation ID`.
    pub equations: Vec<usize>,
    /// `unknowns[local] = parent unknown ID`.
    pub unknowns: Vec<usize>,
}

impl Subgraph {
    pub fn parent_vertex(&self, v: Vertex) -> Vertex {
        match v {
            Vertex::Equation(y) => Vertex::Equation(self.equations[y]),
            Vertex::Unknown(x) => Vertex::Unknown(self.unknowns[x]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_occurrences_collapse() {
        let g = BipartiteGraph::build(1, 1, [(0, vec![0, 0])]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn direct_construction() {
        let g = BipartiteGraph::build(2, 2, [(0, vec![0]), (1, vec![0, 1])]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(g.equations_of(0), &[0, 1]);
    }

    #[test]
    fn out_of_range_unknown_names_equation() {
        let err = BipartiteGraph::build(1, 2, [(0, vec![5])]).unwrap_err();
        assert_eq!(
            err,
            GraphError::UnknownOutOfRange {
                equation: 0,
                unknown: 5,
                unknown_count: 2
            }
        );
        assert!(err.to_string().contains("equation 0"));
    }

    #[test]
    fn components_of_mixed_seven_over_part() {
        let g = BipartiteGraph::from_edges(
            7,
            7,
            &[(0, 0), (1, 1), (2, 2), (3, 2), (4, 3), (5, 3), (6, 4), (6, 5), (6, 6)],
        )
        .unwrap();
        let ys = [2, 3, 4, 5].into_iter().collect();
        let xs = [2, 3].into_iter().collect();
        let comps = g.connected_components_within(&ys, &xs);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].0, [2, 3].into_iter().collect());
        assert_eq!(comps[1].1, [3].into_iter().collect());
    }

    #[test]
    fn induced_relabels() {
        let g = BipartiteGraph::from_edges(3, 3, &[(0, 0), (1, 2), (2, 1), (2, 2)]).unwrap();
        let sub = g.induced(&[1, 2].into_iter().collect(), &[2].into_iter().collect());
        assert_eq!(sub.graph.edges().collect::<Vec<_>>(), vec![(0, 0), (1, 0)]);
        assert_eq!(sub.parent_vertex(Vertex::Equation(1)), Vertex::Equation(2));
    }
}
