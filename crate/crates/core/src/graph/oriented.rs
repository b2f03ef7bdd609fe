use std::collections::BTreeSet;

use super::{BipartiteGraph, GraphError, Matching, Vertex};

/// Directed graph `G'` derived from a bipartite graph and a matching: every
/// edge points from its equation to its unknown, and matched edges also point
/// back from the unknown to the equation.
///
/// Vertices use the dense numbering of [`BipartiteGraph`]: equations
/// `0..|Y|`, then unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedGraph {
    equation_count: usize,
    unknown_count: usize,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
    sources: Vec<Vertex>,
    sinks: Vec<Vertex>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Descendants of the seeds.
    Forward,
    /// Ancestors of the seeds.
    Backward,
}

/// Orients `g` with respect to `m`.
pub fn orient(g: &BipartiteGraph, m: &Matching) -> Result<OrientedGraph, GraphError> {
    m.validate(g)?;
    let ny = g.equation_count();
    let n = g.vertex_count();
    let mut out_arcs = vec![Vec::new(); n];
    let mut in_arcs = vec![Vec::new(); n];
    for (y, x) in g.edges() {
        out_arcs[y].push(ny + x);
        in_arcs[ny + x].push(y);
    }
    for (y, x) in m.pairs() {
        out_arcs[ny + x].push(y);
        in_arcs[y].push(ny + x);
    }
    // equation targets were pushed in order; the rest need sorting
    for adj in out_arcs.iter_mut().chain(in_arcs.iter_mut()) {
        adj.sort_unstable();
    }
    Ok(OrientedGraph {
        equation_count: ny,
        unknown_count: g.unknown_count(),
        out_arcs,
        in_arcs,
        sources: m.unsaturated_equations().map(Vertex::Equation).collect(),
        sinks: m.unsaturated_unknowns().map(Vertex::Unknown).collect(),
    })
}

impl OrientedGraph {
    /// Builds from raw arcs over tagged vertices. Sources and sinks are the
    /// vertices without incoming and outgoing arcs respectively.
    pub fn from_arcs(
        equation_count: usize,
        unknown_count: usize,
        arcs: &[(Vertex, Vertex)],
    ) -> Self {
        let n = equation_count + unknown_count;
        let idx = |v: Vertex| match v {
            Vertex::Equation(y) => y,
            Vertex::Unknown(x) => equation_count + x,
        };
        let mut out_arcs = vec![Vec::new(); n];
        let mut in_arcs = vec![Vec::new(); n];
        for &(a, b) in arcs {
            out_arcs[idx(a)].push(idx(b));
            in_arcs[idx(b)].push(idx(a));
        }
        for adj in out_arcs.iter_mut().chain(in_arcs.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        let mut g = OrientedGraph {
            equation_count,
            unknown_count,
            out_arcs,
            in_arcs,
            sources: Vec::new(),
            sinks: Vec::new(),
        };
        g.sources = (0..n).filter(|&v| g.in_arcs[v].is_empty()).map(|v| g.vertex(v)).collect();
        g.sinks = (0..n).filter(|&v| g.out_arcs[v].is_empty()).map(|v| g.vertex(v)).collect();
        g
    }

    pub fn vertex_count(&self) -> usize {
        self.equation_count + self.unknown_count
    }

    pub fn equation_count(&self) -> usize {
        self.equation_count
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_count
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        if index < self.equation_count {
            Vertex::Equation(index)
        } else {
            Vertex::Unknown(index - self.equation_count)
        }
    }

    pub fn index(&self, v: Vertex) -> usize {
        match v {
            Vertex::Equation(y) => y,
            Vertex::Unknown(x) => self.equation_count + x,
        }
    }

    /// Successors of the vertex with dense index `v`, sorted.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    pub fn arc_count(&self) -> usize {
        self.out_arcs.iter().map(Vec::len).sum()
    }

    /// Every arc as tagged vertices, ordered by tail then head.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out_arcs
            .iter()
            .enumerate()
            .flat_map(move |(a, adj)| adj.iter().map(move |&b| (self.vertex(a), self.vertex(b))))
    }

    /// Unsaturated equations when built by [`orient`].
    pub fn sources(&self) -> &[Vertex] {
        &self.sources
    }

    /// Unsaturated unknowns when built by [`orient`].
    pub fn sinks(&self) -> &[Vertex] {
        &self.sinks
    }
}

/// Closure of `seeds` under arcs (forward) or reversed arcs (backward),
/// seeds included.
pub fn reachable(dg: &OrientedGraph, seeds: &[Vertex], direction: Direction) -> BTreeSet<Vertex> {
    let mut seen = vec![false; dg.vertex_count()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in seeds {
        let i = dg.index(s);
        if !seen[i] {
            seen[i] = true;
            stack.push(i);
        }
    }
    while let Some(v) = stack.pop() {
        let next = match direction {
            Direction::Forward => dg.successors(v),
            Direction::Backward => dg.predecessors(v),
        };
        for &w in next {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| dg.vertex(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Vertex::{Equation as Y, Unknown as X};

    #[test]
    fn matched_edge_doubles() {
        let g = BipartiteGraph::from_edges(1, 1, &[(0, 0)]).unwrap();
        let m = Matching::from_pairs(&g, &[(0, 0)]).unwrap();
        let dg = orient(&g, &m).unwrap();
        assert_eq!(dg.arcs().collect::<Vec<_>>(), vec![(Y(0), X(0)), (X(0), Y(0))]);
        assert!(dg.sources().is_empty() && dg.sinks().is_empty());
    }

    #[test]
    fn unmatched_edge_points_down() {
        let g = BipartiteGraph::from_edges(1, 1, &[(0, 0)]).unwrap();
        let dg = orient(&g, &Matching::empty(1, 1)).unwrap();
        assert_eq!(dg.arcs().collect::<Vec<_>>(), vec![(Y(0), X(0))]);
        assert_eq!(dg.sources(), &[Y(0)]);
        assert_eq!(dg.sinks(), &[X(0)]);
    }

    #[test]
    fn mixed_rule() {
        let g = BipartiteGraph::from_edges(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let m = Matching::from_pairs(&g, &[(0, 0)]).unwrap();
        let dg = orient(&g, &m).unwrap();
        let arcs: BTreeSet<_> = dg.arcs().collect();
        let expect: BTreeSet<_> = [(Y(0), X(0)), (X(0), Y(0)), (Y(1), X(0))].into_iter().collect();
        assert_eq!(arcs, expect);
        assert_eq!(dg.sources(), &[Y(1)]);
        assert!(dg.sinks().is_empty());
        assert_eq!(dg.arc_count(), g.edge_count() + m.size());
    }

    #[test]
    fn foreign_matching_is_rejected() {
        let g = BipartiteGraph::from_edges(1, 2, &[(0, 0)]).unwrap();
        let other = BipartiteGraph::from_edges(1, 2, &[(0, 1)]).unwrap();
        let m = Matching::from_pairs(&other, &[(0, 1)]).unwrap();
        assert!(matches!(orient(&g, &m), Err(GraphError::NotAnEdge { .. })));
    }

    #[test]
    fn reachability() {
        let dg = OrientedGraph::from_arcs(2, 1, &[(Y(0), X(0)), (X(0), Y(1))]);
        assert!(reachable(&dg, &[], Direction::Forward).is_empty());
        let fwd = reachable(&dg, &[Y(0)], Direction::Forward);
        assert_eq!(fwd, [Y(0), X(0), Y(1)].into_iter().collect());
        let back = reachable(&dg, &[Y(1)], Direction::Backward);
        assert_eq!(back, [Y(1), X(0), Y(0)].into_iter().collect());
        assert_eq!(reachable(&dg, &[Y(1)], Direction::Forward), [Y(1)].into_iter().collect());
    }
}
