use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::graph::{topological_order, BipartiteGraph};

use super::{dm_decompose, irreducible_decomposition, DmDecomposition, IrreducibleBlock};

/// Structural verdict on a whole system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Well,
    Over,
    Under,
    /// Both an over- and an under-constrained part are present.
    Mixed,
}

/// Which DM part a vertex or block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartKind {
    Well,
    Over,
    Under,
}

/// Vertices of one DM part with its connected components.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Part {
    pub equations: BTreeSet<usize>,
    pub unknowns: BTreeSet<usize>,
    pub components: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
}

impl Part {
    fn new(g: &BipartiteGraph, equations: &BTreeSet<usize>, unknowns: &BTreeSet<usize>) -> Self {
        Self {
            components: g.connected_components_within(equations, unknowns),
            equations: equations.clone(),
            unknowns: unknowns.clone(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty() && self.unknowns.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnosis {
    pub verdict: Verdict,
    pub g1: Part,
    pub g2: Part,
    pub g3: Part,
    /// Unsaturated over-constrained equations: the candidates for conflict.
    pub conflicting_equations: BTreeSet<usize>,
    /// Unsaturated under-constrained unknowns: the suggested parameters.
    pub free_unknowns: BTreeSet<usize>,
}

/// Summarizes the DM decomposition of `g`.
pub fn classify(g: &BipartiteGraph) -> Diagnosis {
    diagnose(g, &dm_decompose(g))
}

fn diagnose(g: &BipartiteGraph, dm: &DmDecomposition) -> Diagnosis {
    let g1 = Part::new(g, &dm.c1, &dm.c2);
    let g2 = Part::new(g, &dm.d1, &dm.a2);
    let g3 = Part::new(g, &dm.a1, &dm.d2);
    let verdict = match (g2.is_empty(), g3.is_empty()) {
        (true, true) => Verdict::Well,
        (false, true) => Verdict::Over,
        (true, false) => Verdict::Under,
        (false, false) => Verdict::Mixed,
    };
    Diagnosis {
        verdict,
        g1,
        g2,
        g3,
        conflicting_equations: dm.matching.unsaturated_equations().collect(),
        free_unknowns: dm.matching.unsaturated_unknowns().collect(),
    }
}

/// Everything needed to solve a system block by block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionPlan {
    pub decomposition: DmDecomposition,
    /// Irreducible blocks in dependency-first order.
    pub blocks: Vec<IrreducibleBlock>,
    /// Arcs `(i, j)`: block `i` uses unknowns of block `j`, so `j < i`.
    pub dependencies: Vec<(usize, usize)>,
    /// Unknowns that must be bound externally.
    pub free_parameters: BTreeSet<usize>,
    /// Equations left out of the blocks and verified afterwards.
    pub discarded_equations: BTreeSet<usize>,
    pub diagnosis: Diagnosis,
}

impl ResolutionPlan {
    /// Blocks that block `i` directly depends on.
    pub fn dependencies_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.dependencies
            .iter()
            .filter(move |(from, _)| *from == i)
            .map(|&(_, to)| to)
    }

    /// DM part containing block `i`. Strongly connected components never
    /// straddle parts.
    pub fn part_of_block(&self, i: usize) -> PartKind {
        let y = *self.blocks[i].equations.first().expect("blocks are nonempty");
        let dm = &self.decomposition;
        if dm.c1.contains(&y) {
            PartKind::Well
        } else if dm.d1.contains(&y) {
            PartKind::Over
        } else {
            PartKind::Under
        }
    }
}

/// Builds the resolution plan of `g`.
///
/// Unsaturated over-constrained equations are discarded and unsaturated
/// under-constrained unknowns become free parameters. What remains is
/// perfectly matched by the restricted matching and is split into
/// irreducible blocks ordered dependency-first.
pub fn resolution_plan(g: &BipartiteGraph) -> ResolutionPlan {
    let dm = dm_decompose(g);
    let diagnosis = diagnose(g, &dm);
    let discarded_equations: BTreeSet<usize> = dm.matching.unsaturated_equations().collect();
    let free_parameters: BTreeSet<usize> = dm.matching.unsaturated_unknowns().collect();

    let kept_y: BTreeSet<usize> = (0..g.equation_count())
        .filter(|y| !discarded_equations.contains(y))
        .collect();
    let kept_x: BTreeSet<usize> = (0..g.unknown_count())
        .filter(|x| !free_parameters.contains(x))
        .collect();
    let square = g.induced(&kept_y, &kept_x);
    let perfect = dm.matching.restrict(&square);
    let (local_blocks, condensation) =
        irreducible_decomposition(&square.graph, &perfect).expect("restricted matching is perfect");
    let order = topological_order(&condensation).expect("condensation is acyclic");

    let mut position = vec![0usize; order.len()];
    for (pos, &c) in order.iter().enumerate() {
        position[c] = pos;
    }
    let blocks = order
        .iter()
        .map(|&c| {
            let b = &local_blocks[c];
            IrreducibleBlock {
                equations: b.equations.iter().map(|&y| square.equations[y]).collect(),
                unknowns: b.unknowns.iter().map(|&x| square.unknowns[x]).collect(),
                matching: b
                    .matching
                    .iter()
                    .map(|&(y, x)| (square.equations[y], square.unknowns[x]))
                    .collect(),
            }
        })
        .collect();
    let mut dependencies: Vec<(usize, usize)> = condensation
        .dag_arcs
        .iter()
        .map(|&(from, to)| (position[from], position[to]))
        .collect();
    dependencies.sort_unstable();

    ResolutionPlan {
        decomposition: dm,
        blocks,
        dependencies,
        free_parameters,
        discarded_equations,
        diagnosis,
    }
}
