#![allow(dead_code)]

use std::collections::BTreeSet;

use dmplan_core::graph::BipartiteGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn set(v: &[usize]) -> BTreeSet<usize> {
    v.iter().copied().collect()
}

/// Every edge present independently with probability `p`.
pub fn random_graph(rng: &mut impl Rng, ny: usize, nx: usize, p: f64) -> BipartiteGraph {
    let mut edges = Vec::new();
    for y in 0..ny {
        for x in 0..nx {
            if rng.gen_bool(p) {
                edges.push((y, x));
            }
        }
    }
    BipartiteGraph::from_edges(ny, nx, &edges).unwrap()
}

/// Square graph with a hidden perfect matching plus random extra edges.
pub fn random_well_constrained(rng: &mut impl Rng, n: usize, p: f64) -> BipartiteGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = perm.iter().enumerate().map(|(y, &x)| (y, x)).collect();
    for y in 0..n {
        for x in 0..n {
            if rng.gen_bool(p) {
                edges.push((y, x));
            }
        }
    }
    BipartiteGraph::from_edges(n, n, &edges).unwrap()
}

/// Graph with equations relabeled `y -> py[y]` and unknowns `x -> px[x]`.
pub fn permuted(g: &BipartiteGraph, py: &[usize], px: &[usize]) -> BipartiteGraph {
    let edges: Vec<(usize, usize)> = g.edges().map(|(y, x)| (py[y], px[x])).collect();
    BipartiteGraph::from_edges(g.equation_count(), g.unknown_count(), &edges).unwrap()
}

pub fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

pub fn map_set(s: &BTreeSet<usize>, f: &[usize]) -> BTreeSet<usize> {
    s.iter().map(|&v| f[v]).collect()
}

pub fn mixed_seven() -> BipartiteGraph {
    // y1x1 y2x2 y3x3 y4x3 y5x4 y6x4 y7x5 y7x6 y7x7, zero-based
    BipartiteGraph::from_edges(
        7,
        7,
        &[(0, 0), (1, 1), (2, 2), (3, 2), (4, 3), (5, 3), (6, 4), (6, 5), (6, 6)],
    )
    .unwrap()
}
