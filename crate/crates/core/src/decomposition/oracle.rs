//! Exponential reference implementations used to cross-check the
//! polynomial decomposition on small graphs. They enumerate matchings
//! explicitly and share nothing with the matching/orientation route beyond
//! the graph type itself.

use std::collections::BTreeSet;

use crate::graph::{BipartiteGraph, Matching};

use super::{DecompositionError, DmDecomposition};

/// Vertex limit (`|Y| + |X|`) for [`dm_bruteforce_oracle`].
pub const DM_ORACLE_LIMIT: usize = 14;
/// Equation limit for [`is_irreducible_bruteforce`].
pub const IRREDUCIBLE_ORACLE_LIMIT: usize = 12;
/// Vertex limit for [`perfect_matchings`].
pub const PERFECT_ORACLE_LIMIT: usize = 16;

/// Calls `visit` with every matching of `g` (as `(equation, unknown)` pairs),
/// including the empty one.
fn for_each_matching(g: &BipartiteGraph, mut visit: impl FnMut(&[(usize, usize)])) {
    fn go(
        g: &BipartiteGraph,
        y: usize,
        used: &mut [bool],
        chosen: &mut Vec<(usize, usize)>,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if y == g.equation_count() {
            visit(chosen);
            return;
        }
        go(g, y + 1, used, chosen, visit);
        for &x in g.unknowns_of(y) {
            if !used[x] {
                used[x] = true;
                chosen.push((y, x));
                go(g, y + 1, used, chosen, visit);
                chosen.pop();
                used[x] = false;
            }
        }
    }
    let mut used = vec![false; g.unknown_count()];
    go(g, 0, &mut used, &mut Vec::new(), &mut visit);
}

/// DM partition straight from its definition: `D` is every vertex missed by
/// at least one maximum matching, `A` the remaining vertices adjacent to `D`,
/// `C` the rest.
pub fn dm_bruteforce_oracle(g: &BipartiteGraph) -> Result<DmDecomposition, DecompositionError> {
    if g.vertex_count() > DM_ORACLE_LIMIT {
        return Err(DecompositionError::OracleTooLarge {
            what: "vertices",
            size: g.vertex_count(),
            limit: DM_ORACLE_LIMIT,
        });
    }
    let (ny, nx) = (g.equation_count(), g.unknown_count());
    let mut best = 0usize;
    let mut witness: Vec<(usize, usize)> = Vec::new();
    let mut missed_y = vec![false; ny];
    let mut missed_x = vec![false; nx];
    for_each_matching(g, |pairs| {
        if pairs.len() > best {
            best = pairs.len();
            witness = pairs.to_vec();
            missed_y.iter_mut().for_each(|m| *m = false);
            missed_x.iter_mut().for_each(|m| *m = false);
        }
        if pairs.len() == best {
            let mut cov_y = vec![false; ny];
            let mut cov_x = vec![false; nx];
            for &(y, x) in pairs {
                cov_y[y] = true;
                cov_x[x] = true;
            }
            for y in 0..ny {
                missed_y[y] |= !cov_y[y];
            }
            for x in 0..nx {
                missed_x[x] |= !cov_x[x];
            }
        }
    });

    let d_y: BTreeSet<usize> = (0..ny).filter(|&y| missed_y[y]).collect();
    let d_x: BTreeSet<usize> = (0..nx).filter(|&x| missed_x[x]).collect();
    let a_y: BTreeSet<usize> = (0..ny)
        .filter(|y| !d_y.contains(y) && g.unknowns_of(*y).iter().any(|x| d_x.contains(x)))
        .collect();
    let a_x: BTreeSet<usize> = (0..nx)
        .filter(|x| !d_x.contains(x) && g.equations_of(*x).iter().any(|y| d_y.contains(y)))
        .collect();
    let c_y = (0..ny).filter(|y| !d_y.contains(y) && !a_y.contains(y)).collect();
    let c_x = (0..nx).filter(|x| !d_x.contains(x) && !a_x.contains(x)).collect();

    let matching = Matching::from_pairs(g, &witness).expect("enumerated pairs are graph edges");
    Ok(DmDecomposition::from_classes(g, matching, [c_y, c_x, d_y, a_x, a_y, d_x]))
}

/// Irreducibility straight from the subset condition: every proper nonempty
/// equation subset `Z` has `|Γ(Z)| > |Z|`.
pub fn is_irreducible_bruteforce(g: &BipartiteGraph) -> Result<bool, DecompositionError> {
    let ny = g.equation_count();
    if ny > IRREDUCIBLE_ORACLE_LIMIT {
        return Err(DecompositionError::OracleTooLarge {
            what: "equations",
            size: ny,
            limit: IRREDUCIBLE_ORACLE_LIMIT,
        });
    }
    let full = (1u32 << ny) - 1;
    Ok((1..full).all(|mask| {
        let z: Vec<usize> = (0..ny).filter(|&y| mask & (1 << y) != 0).collect();
        g.neighborhood(&z).len() > z.len()
    }))
}

/// Every perfect matching of `g`, each as sorted pairs.
pub fn perfect_matchings(g: &BipartiteGraph) -> Result<Vec<Vec<(usize, usize)>>, DecompositionError> {
    if g.vertex_count() > PERFECT_ORACLE_LIMIT {
        return Err(DecompositionError::OracleTooLarge {
            what: "vertices",
            size: g.vertex_count(),
            limit: PERFECT_ORACLE_LIMIT,
        });
    }
    let mut out = Vec::new();
    if g.equation_count() == g.unknown_count() {
        let n = g.equation_count();
        for_each_matching(g, |pairs| {
            if pairs.len() == n {
                out.push(pairs.to_vec());
            }
        });
    }
    Ok(out)
}

/// Edges lying in at least one perfect matching (the graph `H`).
pub fn edges_in_perfect_matchings(g: &BipartiteGraph) -> Result<BTreeSet<(usize, usize)>, DecompositionError> {
    Ok(perfect_matchings(g)?.into_iter().flatten().collect())
}
