mod common;

use std::collections::BTreeSet;

use common::*;
use dmplan_core::decomposition::{dm_bruteforce_oracle, dm_decompose, resolution_plan, PartKind};
use dmplan_core::graph::{maximum_matching, orient, BipartiteGraph, Vertex};
use rand::seq::SliceRandom;
use rand::Rng;

fn assert_matches_oracle(g: &BipartiteGraph) {
    let fast = dm_decompose(g);
    let slow = dm_bruteforce_oracle(g).unwrap();
    assert_eq!(fast.classes(), slow.classes(), "graph {:?}", g.edges().collect::<Vec<_>>());
}

#[test]
fn all_graphs_up_to_three_by_three() {
    let mut count = 0;
    for ny in 0..=3 {
        for nx in 0..=3 {
            let cells: Vec<(usize, usize)> = (0..ny).flat_map(|y| (0..nx).map(move |x| (y, x))).collect();
            for mask in 0u32..(1 << cells.len()) {
                let edges: Vec<_> = cells
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                assert_matches_oracle(&BipartiteGraph::from_edges(ny, nx, &edges).unwrap());
                count += 1;
            }
        }
    }
    assert_eq!(count, 689);
}

#[test]
fn random_graphs_up_to_five_by_five() {
    let mut r = rng(7);
    for _ in 0..1500 {
        let (ny, nx) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let p = r.gen_range(0.1..0.7);
        assert_matches_oracle(&random_graph(&mut r, ny, nx, p));
    }
}

#[test]
fn mixed_seven_partition() {
    let g = mixed_seven();
    let dm = dm_decompose(&g);
    assert_eq!((dm.c1.clone(), dm.c2.clone()), (set(&[0, 1]), set(&[0, 1])));
    assert_eq!((dm.d1.clone(), dm.a2.clone()), (set(&[2, 3, 4, 5]), set(&[2, 3])));
    assert_eq!((dm.a1.clone(), dm.d2.clone()), (set(&[6]), set(&[4, 5, 6])));
    assert_matches_oracle(&g);
    let plan = resolution_plan(&g);
    assert_eq!(plan.diagnosis.g2.components.len(), 2);
}

/// Structural facts that hold for every maximum matching.
#[test]
fn part_properties() {
    let mut r = rng(11);
    for _ in 0..500 {
        let (ny, nx) = (r.gen_range(1..=7), r.gen_range(1..=7));
        let p = r.gen_range(0.1..0.6);
        let g = random_graph(&mut r, ny, nx, p);
        let dm = dm_decompose(&g);
        let m = &dm.matching;

        // G1 is perfectly matched within itself
        assert_eq!(dm.c1.len(), dm.c2.len());
        for &y in &dm.c1 {
            assert!(dm.c2.contains(&m.pair_of_equation(y).unwrap()));
        }
        // G2 has more equations, G3 more unknowns, when nonempty
        if !dm.d1.is_empty() {
            assert!(dm.d1.len() > dm.a2.len());
        }
        if !dm.d2.is_empty() {
            assert!(dm.d2.len() > dm.a1.len());
        }
        // in G', nothing leaves G2 and nothing enters G3
        let dg = orient(&g, m).unwrap();
        let in_g2 = |v: Vertex| match v {
            Vertex::Equation(y) => dm.d1.contains(&y),
            Vertex::Unknown(x) => dm.a2.contains(&x),
        };
        let in_g3 = |v: Vertex| match v {
            Vertex::Equation(y) => dm.a1.contains(&y),
            Vertex::Unknown(x) => dm.d2.contains(&x),
        };
        for (a, b) in dg.arcs() {
            if in_g2(a) {
                assert!(in_g2(b), "arc {a} -> {b} leaves G2");
            }
            if in_g3(b) {
                assert!(in_g3(a), "arc {a} -> {b} enters G3");
            }
        }
        // Γ(D1) = A2
        let gamma: BTreeSet<usize> = g.neighborhood(&dm.d1);
        assert_eq!(gamma, dm.a2);
    }
}

#[test]
fn permutations_do_not_change_partitions() {
    let mut r = rng(23);
    for round in 0..120 {
        let (ny, nx) = (r.gen_range(1..=7), r.gen_range(1..=7));
        let p = r.gen_range(0.15..0.6);
        let g = if round % 3 == 0 {
            random_well_constrained(&mut r, ny, 0.2)
        } else {
            random_graph(&mut r, ny, nx, p)
        };
        let dm = dm_decompose(&g);
        let plan = resolution_plan(&g);
        let g1_blocks = |plan: &dmplan_core::decomposition::ResolutionPlan, fy: &[usize], fx: &[usize]| {
            (0..plan.blocks.len())
                .filter(|&i| plan.part_of_block(i) == PartKind::Well)
                .map(|i| (map_set(&plan.blocks[i].equations, fy), map_set(&plan.blocks[i].unknowns, fx)))
                .collect::<BTreeSet<_>>()
        };
        let ident_y: Vec<usize> = (0..g.equation_count()).collect();
        let ident_x: Vec<usize> = (0..g.unknown_count()).collect();
        let reference = g1_blocks(&plan, &ident_y, &ident_x);

        for _ in 0..20 {
            let mut py = ident_y.clone();
            let mut px = ident_x.clone();
            py.shuffle(&mut r);
            px.shuffle(&mut r);
            let h = permuted(&g, &py, &px);
            let (iy, ix) = (inverse(&py), inverse(&px));
            let hd = dm_decompose(&h);
            assert_eq!(map_set(&hd.c1, &iy), dm.c1);
            assert_eq!(map_set(&hd.c2, &ix), dm.c2);
            assert_eq!(map_set(&hd.d1, &iy), dm.d1);
            assert_eq!(map_set(&hd.a2, &ix), dm.a2);
            assert_eq!(map_set(&hd.a1, &iy), dm.a1);
            assert_eq!(map_set(&hd.d2, &ix), dm.d2);
            assert_eq!(g1_blocks(&resolution_plan(&h), &iy, &ix), reference);
        }
    }
}

#[test]
fn matching_is_maximum_size() {
    let mut r = rng(5);
    for _ in 0..300 {
        let (ny, nx) = (r.gen_range(1..=5), r.gen_range(1..=5));
        let g = random_graph(&mut r, ny, nx, 0.4);
        let fast = maximum_matching(&g).size();
        let dm = dm_bruteforce_oracle(&g).unwrap();
        assert_eq!(fast, dm.matching.size());
    }
}
