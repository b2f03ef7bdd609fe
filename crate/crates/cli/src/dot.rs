//! Graphviz output.
//!
//! Condensation and plan graphs draw an edge from each component to the
//! components that use its unknowns, so they read top-down in resolution
//! order.

use std::fmt::Write as _;

use dmplan_core::decomposition::{DmDecomposition, PartKind, ResolutionPlan};
use dmplan_core::graph::{BipartiteGraph, Condensation, Matching, OrientedGraph, Vertex};
use dmplan_core::system::EquationSystem;

fn node_id(v: Vertex) -> String {
    match v {
        Vertex::Equation(y) => format!("y{y}"),
        Vertex::Unknown(x) => format!("x{x}"),
    }
}

fn name(system: &EquationSystem, v: Vertex) -> &str {
    match v {
        Vertex::Equation(y) => &system.equations[y].name,
        Vertex::Unknown(x) => &system.unknowns[x].name,
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn color(kind: PartKind) -> &'static str {
    match kind {
        PartKind::Well => "palegreen",
        PartKind::Over => "lightsalmon",
        PartKind::Under => "lightblue",
    }
}

fn part_of(dm: &DmDecomposition, v: Vertex) -> PartKind {
    match v {
        Vertex::Equation(y) if dm.d1.contains(&y) => PartKind::Over,
        Vertex::Unknown(x) if dm.a2.contains(&x) => PartKind::Over,
        Vertex::Equation(y) if dm.a1.contains(&y) => PartKind::Under,
        Vertex::Unknown(x) if dm.d2.contains(&x) => PartKind::Under,
        _ => PartKind::Well,
    }
}

fn vertex_nodes(out: &mut String, system: &EquationSystem) {
    out.push_str("  { rank=same;\n");
    for y in 0..system.equations.len() {
        let v = Vertex::Equation(y);
        let _ = writeln!(out, "    {} [label={}, shape=box];", node_id(v), quote(name(system, v)));
    }
    out.push_str("  }\n  { rank=same;\n");
    for x in 0..system.unknowns.len() {
        let v = Vertex::Unknown(x);
        let _ = writeln!(out, "    {} [label={}, shape=ellipse];", node_id(v), quote(name(system, v)));
    }
    out.push_str("  }\n");
}

/// Equations on the top rank, unknowns below, matched edges bold.
pub fn bipartite(system: &EquationSystem, g: &BipartiteGraph, m: &Matching) -> String {
    let mut out = String::from("graph bipartite {\n  rankdir=TB;\n");
    vertex_nodes(&mut out, system);
    for (y, x) in g.edges() {
        let style = if m.pair_of_equation(y) == Some(x) { " [style=bold]" } else { "" };
        let _ = writeln!(out, "  y{y} -- x{x}{style};");
    }
    out.push_str("}\n");
    out
}

pub fn oriented(system: &EquationSystem, dg: &OrientedGraph) -> String {
    let mut out = String::from("digraph oriented {\n  rankdir=TB;\n");
    vertex_nodes(&mut out, system);
    for (a, b) in dg.arcs() {
        let _ = writeln!(out, "  {} -> {};", node_id(a), node_id(b));
    }
    out.push_str("}\n");
    out
}

pub fn condensation(system: &EquationSystem, c: &Condensation, dm: &DmDecomposition) -> String {
    let mut out = String::from("digraph condensation {\n  rankdir=TB;\n  node [shape=box, style=filled];\n");
    for (i, members) in c.components.iter().enumerate() {
        let label: Vec<&str> = members.iter().map(|&v| name(system, v)).collect();
        let kind = part_of(dm, members[0]);
        let _ = writeln!(
            out,
            "  c{i} [label={}, fillcolor={}];",
            quote(&label.join(" ")),
            color(kind)
        );
    }
    for &(from, to) in &c.dag_arcs {
        let _ = writeln!(out, "  c{to} -> c{from};");
    }
    out.push_str("}\n");
    out
}

/// The block DAG of a resolution plan.
pub fn plan(system: &EquationSystem, plan: &ResolutionPlan) -> String {
    let mut out = String::from("digraph plan {\n  rankdir=TB;\n  node [shape=box, style=filled];\n");
    for (i, b) in plan.blocks.iter().enumerate() {
        let eqs: Vec<&str> = b.equations.iter().map(|&y| system.equations[y].name.as_str()).collect();
        let xs: Vec<&str> = b.unknowns.iter().map(|&x| system.unknowns[x].name.as_str()).collect();
        let label = format!("{i}: {} | {}", eqs.join(" "), xs.join(" "));
        let _ = writeln!(
            out,
            "  b{i} [label={}, fillcolor={}];",
            quote(&label),
            color(plan.part_of_block(i))
        );
    }
    for &(from, to) in &plan.dependencies {
        let _ = writeln!(out, "  b{to} -> b{from};");
    }
    out.push_str("}\n");
    out
}
