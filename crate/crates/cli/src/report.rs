//! JSON report model.

use std::collections::BTreeSet;

use dmplan_core::decomposition::{Part, PartKind, ResolutionPlan, Verdict};
use dmplan_core::solver::SystemSolution;
use dmplan_core::system::EquationSystem;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub verdict: Verdict,
    pub parts: Parts,
    pub blocks: Vec<BlockReport>,
    pub dependencies: Vec<Dependency>,
    pub free_parameters: Vec<String>,
    pub discarded_equations: Vec<String>,
    pub matching: Vec<MatchedPair>,
    pub solutions: Vec<SolutionReport>,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parts {
    pub g1: PartReport,
    pub g2: PartReport,
    pub g3: PartReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartReport {
    pub equations: Vec<String>,
    pub unknowns: Vec<String>,
    pub components: Vec<Component>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub equations: Vec<String>,
    pub unknowns: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockReport {
    pub index: usize,
    pub part: PartKind,
    pub equations: Vec<String>,
    pub unknowns: Vec<String>,
    pub depends_on: Vec<usize>,
}

/// Block `from` uses unknowns computed by block `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dependency {
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub equation: String,
    pub unknown: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionReport {
    /// Unknown name to value, in declaration order.
    pub assignment: Map<String, Value>,
    /// Equation name to |residual|; `null` where the residual is undefined.
    pub residuals: Map<String, Value>,
    pub discarded_ok: bool,
    pub failing_equations: Vec<String>,
    pub certified: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub decompose_ms: Option<f64>,
    pub solve_ms: Option<f64>,
}

struct Names<'a>(&'a EquationSystem);

impl Names<'_> {
    fn equations(&self, ids: &BTreeSet<usize>) -> Vec<String> {
        ids.iter().map(|&y| self.0.equations[y].name.clone()).collect()
    }

    fn unknowns(&self, ids: &BTreeSet<usize>) -> Vec<String> {
        ids.iter().map(|&x| self.0.unknowns[x].name.clone()).collect()
    }

    fn part(&self, p: &Part) -> PartReport {
        PartReport {
            equations: self.equations(&p.equations),
            unknowns: self.unknowns(&p.unknowns),
            components: p
                .components
                .iter()
                .map(|(ys, xs)| Component {
                    equations: self.equations(ys),
                    unknowns: self.unknowns(xs),
                })
                .collect(),
        }
    }
}

impl Report {
    pub fn new(system: &EquationSystem, plan: &ResolutionPlan) -> Self {
        let names = Names(system);
        let d = &plan.diagnosis;
        Self {
            schema_version: SCHEMA_VERSION,
            verdict: d.verdict,
            parts: Parts {
                g1: names.part(&d.g1),
                g2: names.part(&d.g2),
                g3: names.part(&d.g3),
            },
            blocks: plan
                .blocks
                .iter()
                .enumerate()
                .map(|(i, b)| BlockReport {
                    index: i,
                    part: plan.part_of_block(i),
                    equations: names.equations(&b.equations),
                    unknowns: names.unknowns(&b.unknowns),
                    depends_on: plan.dependencies_of(i).collect(),
                })
                .collect(),
            dependencies: plan
                .dependencies
                .iter()
                .map(|&(from, to)| Dependency { from, to })
                .collect(),
            free_parameters: names.unknowns(&plan.free_parameters),
            discarded_equations: names.equations(&plan.discarded_equations),
            matching: plan
                .decomposition
                .matching
                .pairs()
                .map(|(y, x)| MatchedPair {
                    equation: system.equations[y].name.clone(),
                    unknown: system.unknowns[x].name.clone(),
                })
                .collect(),
            solutions: Vec::new(),
            timings: Timings::default(),
        }
    }
}

fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

impl SolutionReport {
    pub fn new(s: &SystemSolution<f64>, discarded: &[String], tol_residual: f64) -> Self {
        Self {
            assignment: s.assignment.iter().map(|(n, v)| (n.clone(), number(*v))).collect(),
            residuals: s.residuals.iter().map(|(n, v)| (n.clone(), number(*v))).collect(),
            discarded_ok: s.discarded_ok,
            failing_equations: s
                .residuals
                .iter()
                .filter(|(n, r)| discarded.contains(n) && !(*r <= tol_residual))
                .map(|(n, _)| n.clone())
                .collect(),
            certified: s.certified,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dmplan_core::decomposition::resolution_plan;
    use dmplan_core::system::parse_system;

    #[test]
    fn keys_are_always_present() {
        let s = parse_system("var x\neq e: x - 1 = 0").unwrap();
        let r = Report::new(&s, &resolution_plan(&s.graph().unwrap()));
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "schema_version",
            "verdict",
            "parts",
            "blocks",
            "dependencies",
            "free_parameters",
            "discarded_equations",
            "matching",
            "solutions",
            "timings",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["parts"]["g2"]["components"], serde_json::json!([]));
        assert_eq!(v["timings"]["solve_ms"], Value::Null);
        assert_eq!(v["verdict"], "well");
    }

    #[test]
    fn round_trip() {
        let s = parse_system("var x y z\neq a: x + y = 1\neq b: x - y = 0\neq c: x*2 - 1 = 0").unwrap();
        let mut r = Report::new(&s, &resolution_plan(&s.graph().unwrap()));
        r.timings.solve_ms = Some(0.125);
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
