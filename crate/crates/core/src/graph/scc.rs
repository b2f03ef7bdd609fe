use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{GraphError, OrientedGraph, Vertex};

/// Strongly connected components of an oriented graph and the acyclic
/// graph obtained by contracting each of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    equation_count: usize,
    /// Member vertices of each component, sorted.
    pub components: Vec<Vec<Vertex>>,
    /// Component index per dense vertex index.
    pub component_of: Vec<usize>,
    /// Deduplicated arcs `(from, to)` between distinct components, sorted.
    pub dag_arcs: Vec<(usize, usize)>,
}

impl Condensation {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn component_of_vertex(&self, v: Vertex) -> usize {
        match v {
            Vertex::Equation(y) => self.component_of[y],
            Vertex::Unknown(x) => self.component_of[self.equation_count + x],
        }
    }

    /// Smallest vertex of component `c`; the deterministic tie-break key.
    pub fn representative(&self, c: usize) -> Vertex {
        self.components[c][0]
    }
}

/// Tarjan's algorithm, iterative.
///
/// Roots are tried in increasing vertex order and successors in sorted order.
/// Components come out in reverse topological order: if there is an arc
/// `c1 -> c2` then `c2` is emitted before `c1`.
pub fn strongly_connected_components(dg: &OrientedGraph) -> Condensation {
    const UNVISITED: usize = usize::MAX;
    let n = dg.vertex_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut component_of = vec![UNVISITED; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    let mut counter = 0usize;
    // call stack of (vertex, next successor position)
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            let succ = dg.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let c = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component_of[w] = c;
                    members.push(dg.vertex(w));
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }

    let mut dag_arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|v| dg.successors(v).iter().map(move |&w| (v, w)))
        .map(|(v, w)| (component_of[v], component_of[w]))
        .filter(|(a, b)| a != b)
        .collect();
    dag_arcs.sort_unstable();
    dag_arcs.dedup();

    Condensation {
        equation_count: dg.equation_count(),
        components,
        component_of,
        dag_arcs,
    }
}

/// Dependency-first total order of the condensation: for every arc
/// `c1 -> c2`, `c2` precedes `c1`. Among ready components the one with the
/// smallest vertex goes first.
pub fn topological_order(c: &Condensation) -> Result<Vec<usize>, GraphError> {
    let k = c.len();
    let mut pending_out = vec![0usize; k];
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(from, to) in &c.dag_arcs {
        pending_out[from] += 1;
        dependents[to].push(from);
    }
    let mut ready: BinaryHeap<Reverse<(Vertex, usize)>> = (0..k)
        .filter(|&i| pending_out[i] == 0)
        .map(|i| Reverse((c.representative(i), i)))
        .collect();
    let mut order = Vec::with_capacity(k);
    while let Some(Reverse((_, i))) = ready.pop() {
        order.push(i);
        for &d in &dependents[i] {
            pending_out[d] -= 1;
            if pending_out[d] == 0 {
                ready.push(Reverse((c.representative(d), d)));
            }
        }
    }
    if order.len() != k {
        return Err(GraphError::Cycle);
    }
    Ok(order)
}
