use std::collections::VecDeque;

use super::{BipartiteGraph, GraphError, Subgraph};

/// A set of vertex-disjoint edges, stored as the two partial pairing maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pair_of_equation: Vec<Option<usize>>,
    pair_of_unknown: Vec<Option<usize>>,
    size: usize,
}

impl Matching {
    pub fn empty(equation_count: usize, unknown_count: usize) -> Self {
        Self {
            pair_of_equation: vec![None; equation_count],
            pair_of_unknown: vec![None; unknown_count],
            size: 0,
        }
    }

    /// Builds a matching from explicit pairs, checking every pair is an edge of
    /// `g` and no vertex is used twice.
    pub fn from_pairs(g: &BipartiteGraph, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut m = Self::empty(g.equation_count(), g.unknown_count());
        for &(y, x) in pairs {
            if !g.has_edge(y, x) {
                return Err(GraphError::NotAnEdge { equation: y, unknown: x });
            }
            if m.pair_of_equation[y].is_some() || m.pair_of_unknown[x].is_some() {
                return Err(GraphError::MatchingShape(format!(
                    "vertex reused by pair (y{y}, x{x})"
                )));
            }
            m.insert(y, x);
        }
        Ok(m)
    }

    fn insert(&mut self, y: usize, x: usize) {
        self.pair_of_equation[y] = Some(x);
        self.pair_of_unknown[x] = Some(y);
        self.size += 1;
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn equation_count(&self) -> usize {
        self.pair_of_equation.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.pair_of_unknown.len()
    }

    pub fn pair_of_equation(&self, y: usize) -> Option<usize> {
        self.pair_of_equation[y]
    }

    pub fn pair_of_unknown(&self, x: usize) -> Option<usize> {
        self.pair_of_unknown[x]
    }

    /// Matched `(equation, unknown)` pairs in equation order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pair_of_equation
            .iter()
            .enumerate()
            .filter_map(|(y, x)| x.map(|x| (y, x)))
    }

    pub fn unsaturated_equations(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.equation_count()).filter(|&y| self.pair_of_equation[y].is_none())
    }

    pub fn unsaturated_unknowns(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.unknown_count()).filter(|&x| self.pair_of_unknown[x].is_none())
    }

    /// Saturates every vertex on both sides.
    pub fn is_perfect(&self) -> bool {
        self.size == self.equation_count() && self.size == self.unknown_count()
    }

    /// Checks shape and edge membership against `g`.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<(), GraphError> {
        if self.equation_count() != g.equation_count() || self.unknown_count() != g.unknown_count() {
            return Err(GraphError::MatchingShape(format!(
                "matching is over {}x{} vertices, graph has {}x{}",
                self.equation_count(),
                self.unknown_count(),
                g.equation_count(),
                g.unknown_count()
            )));
        }
        for (y, x) in self.pairs() {
            if !g.has_edge(y, x) {
                return Err(GraphError::NotAnEdge { equation: y, unknown: x });
            }
            if self.pair_of_unknown[x] != Some(y) {
                return Err(GraphError::MatchingShape(format!(
                    "pairing maps disagree at (y{y}, x{x})"
                )));
            }
        }
        Ok(())
    }

    /// Restriction to the pairs with both endpoints inside `sub`, relabeled to
    /// the subgraph's local IDs.
    pub fn restrict(&self, sub: &Subgraph) -> Matching {
        let mut local_unknown = vec![None; self.unknown_count()];
        for (l, &x) in sub.unknowns.iter().enumerate() {
            local_unknown[x] = Some(l);
        }
        let mut m = Matching::empty(sub.equations.len(), sub.unknowns.len());
        for (ly, &y) in sub.equations.iter().enumerate() {
            if let Some(lx) = self.pair_of_equation[y].and_then(|x| local_unknown[x]) {
                m.insert(ly, lx);
            }
        }
        m
    }
}

/// Maximum-cardinality matching by Hopcroft–Karp.
///
/// Free equations are processed in increasing ID order and neighbor lists are
/// sorted, so the result is a deterministic function of the graph.
pub fn maximum_matching(g: &BipartiteGraph) -> Matching {
    let ny = g.equation_count();
    let mut m = Matching::empty(ny, g.unknown_count());
    let mut dist = vec![usize::MAX; ny];
    let mut cursor = vec![0usize; ny];
    while bfs_layers(g, &m, &mut dist) {
        cursor.iter_mut().for_each(|c| *c = 0);
        for y in 0..ny {
            if m.pair_of_equation[y].is_none() && augment(g, &mut m, &mut dist, &mut cursor, y) {
                m.size += 1;
            }
        }
    }
    m
}

/// Layers equations by alternating-path distance from the free equations.
/// Returns whether some free unknown is reachable.
fn bfs_layers(g: &BipartiteGraph, m: &Matching, dist: &mut [usize]) -> bool {
    let mut queue = VecDeque::new();
    for (y, d) in dist.iter_mut().enumerate() {
        if m.pair_of_equation[y].is_none() {
            *d = 0;
            queue.push_back(y);
        } else {
            *d = usize::MAX;
        }
    }
    let mut found = false;
    while let Some(y) = queue.pop_front() {
        for &x in g.unknowns_of(y) {
            match m.pair_of_unknown[x] {
                None => found = true,
                Some(y2) if dist[y2] == usize::MAX => {
                    dist[y2] = dist[y] + 1;
                    queue.push_back(y2);
                }
                Some(_) => {}
            }
        }
    }
    found
}

/// Iterative layered DFS for one augmenting path from free equation `root`.
fn augment(
    g: &BipartiteGraph,
    m: &mut Matching,
    dist: &mut [usize],
    cursor: &mut [usize],
    root: usize,
) -> bool {
    // stack of (equation, unknown used to enter the next level)
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut y = root;
    loop {
        let adj = g.unknowns_of(y);
        let mut advanced = false;
        while cursor[y] < adj.len() {
            let x = adj[cursor[y]];
            cursor[y] += 1;
            match m.pair_of_unknown[x] {
                None => {
                    // flip the path root..y, x
                    let (mut cy, mut cx) = (y, x);
                    loop {
                        m.pair_of_equation[cy] = Some(cx);
                        m.pair_of_unknown[cx] = Some(cy);
                        match stack.pop() {
                            Some((py, px)) => {
                                cy = py;
                                cx = px;
                            }
                            None => return true,
                        }
                    }
                }
                Some(y2) if dist[y2] != usize::MAX && dist[y2] == dist[y] + 1 => {
                    stack.push((y, x));
                    y = y2;
                    advanced = true;
                    break;
                }
                Some(_) => {}
            }
        }
        if advanced {
            continue;
        }
        dist[y] = usize::MAX;
        match stack.pop() {
            Some((py, _)) => y = py,
            None => return false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exhaustive maximum matching size: each equation is either skipped or
    /// paired with a free neighbor.
    fn brute_force_max(g: &BipartiteGraph) -> usize {
        fn go(g: &BipartiteGraph, y: usize, used: &mut Vec<bool>) -> usize {
            if y == g.equation_count() {
                return 0;
            }
            let mut best = go(g, y + 1, used);
            for &x in g.unknowns_of(y) {
                if !used[x] {
                    used[x] = true;
                    best = best.max(1 + go(g, y + 1, used));
                    used[x] = false;
                }
            }
            best
        }
        go(g, 0, &mut vec![false; g.unknown_count()])
    }

    fn hall_holds(g: &BipartiteGraph) -> bool {
        let ny = g.equation_count();
        (1u32..(1 << ny)).all(|mask| {
            let subset: Vec<usize> = (0..ny).filter(|&y| mask & (1 << y) != 0).collect();
            g.neighborhood(&subset).len() >= subset.len()
        })
    }

    fn arb_graph(max_side: usize) -> impl Strategy<Value = BipartiteGraph> {
        (0..=max_side, 0..=max_side).prop_flat_map(|(ny, nx)| {
            proptest::collection::vec(any::<bool>(), ny * nx).prop_map(move |bits| {
                let edges: Vec<(usize, usize)> = (0..ny * nx)
                    .filter(|&k| bits[k])
                    .map(|k| (k / nx.max(1), k % nx.max(1)))
                    .collect();
                BipartiteGraph::from_edges(ny, nx, &edges).unwrap()
            })
        })
    }

    #[test]
    fn empty_graph() {
        let g = BipartiteGraph::from_edges(0, 0, &[]).unwrap();
        assert_eq!(maximum_matching(&g).size(), 0);
    }

    #[test]
    fn complete_three_by_three() {
        let edges: Vec<_> = (0..3).flat_map(|y| (0..3).map(move |x| (y, x))).collect();
        let g = BipartiteGraph::from_edges(3, 3, &edges).unwrap();
        let m = maximum_matching(&g);
        assert_eq!(m.size(), 3);
        assert!(m.is_perfect());
    }

    #[test]
    fn three_equations_two_unknowns() {
        let g = BipartiteGraph::from_edges(3, 2, &[(0, 0), (1, 0), (1, 1), (2, 1)]).unwrap();
        assert_eq!(brute_force_max(&g), 2);
        let m = maximum_matching(&g);
        assert_eq!(m.size(), 2);
        m.validate(&g).unwrap();
    }

    #[test]
    fn lowest_equation_wins_ties() {
        let g = BipartiteGraph::from_edges(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let m = maximum_matching(&g);
        assert_eq!(m.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
        let g = BipartiteGraph::from_edges(1, 2, &[(0, 0), (0, 1)]).unwrap();
        assert_eq!(maximum_matching(&g).pairs().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn long_augmenting_chain() {
        // path y0-x0-y1-x1-...; greedy order forces repeated augmentation
        let n = 2000;
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((i, i));
            if i + 1 < n {
                edges.push((i + 1, i));
            }
        }
        let g = BipartiteGraph::from_edges(n, n, &edges).unwrap();
        assert_eq!(maximum_matching(&g).size(), n);
    }

    #[test]
    fn from_pairs_rejects_non_edges() {
        let g = BipartiteGraph::from_edges(1, 2, &[(0, 0)]).unwrap();
        assert!(matches!(
            Matching::from_pairs(&g, &[(0, 1)]),
            Err(GraphError::NotAnEdge { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1500))]

        #[test]
        fn maximum_equals_brute_force(g in arb_graph(5)) {
            let m = maximum_matching(&g);
            m.validate(&g).unwrap();
            prop_assert_eq!(m.size(), brute_force_max(&g));
        }

        #[test]
        fn saturating_matching_iff_konig_hall(g in arb_graph(5)) {
            let m = maximum_matching(&g);
            prop_assert_eq!(m.size() == g.equation_count(), hall_holds(&g));
        }

        #[test]
        fn deterministic(g in arb_graph(5)) {
            prop_assert_eq!(maximum_matching(&g), maximum_matching(&g.clone()));
        }
    }
}
