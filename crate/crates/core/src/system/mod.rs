//! Equation systems: expressions, interval arithmetic, the textual format.

mod diff;
mod expr;
mod interval;
mod parse;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use diff::differentiate;
pub use expr::{BinaryOp, Env, EvalError, Expr, IntervalEvalError, UnaryOp, VarRef};
pub use interval::{Interval, IntervalError};
pub use parse::{parse_system, ParseError, ParseErrorKind};

use crate::graph::{BipartiteGraph, GraphError};
use crate::scalar::Scalar;

/// Search box used for unknowns without a `domain` line.
pub const DEFAULT_DOMAIN: (f64, f64) = (-1e3, 1e3);

#[derive(Debug, Clone, PartialEq)]
pub struct Unknown {
    pub name: String,
    pub domain: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EquationBody {
    /// Residual expression; the equation reads `expr = 0`.
    Expression(Expr),
    /// Structural-only: just the unknowns that occur.
    Uses(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub name: String,
    pub body: EquationBody,
}

impl Equation {
    pub fn residual(&self) -> Option<&Expr> {
        match &self.body {
            EquationBody::Expression(e) => Some(e),
            EquationBody::Uses(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquationSystem {
    pub unknowns: Vec<Unknown>,
    pub parameters: Vec<Parameter>,
    pub equations: Vec<Equation>,
    /// Every equation is a `uses` list; nothing can be solved numerically.
    pub structural_only: bool,
}

impl EquationSystem {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_system(text)
    }

    /// Sorted unknown occurrences per equation.
    pub fn incidence(&self) -> Vec<(usize, Vec<usize>)> {
        self.equations
            .iter()
            .enumerate()
            .map(|(i, eq)| {
                let mut xs: Vec<usize> = match &eq.body {
                    EquationBody::Expression(e) => e.unknowns().into_iter().collect(),
                    EquationBody::Uses(u) => u.clone(),
                };
                xs.sort_unstable();
                xs.dedup();
                (i, xs)
            })
            .collect()
    }

    pub fn graph(&self) -> Result<BipartiteGraph, GraphError> {
        BipartiteGraph::build(self.equations.len(), self.unknowns.len(), self.incidence())
    }

    pub fn lookup(&self, name: &str) -> Option<VarRef> {
        if let Some(i) = self.unknowns.iter().position(|u| u.name == name) {
            return Some(VarRef::Unknown(i));
        }
        self.parameters
            .iter()
            .position(|p| p.name == name)
            .map(VarRef::Param)
    }

    pub fn equation_index(&self, name: &str) -> Option<usize> {
        self.equations.iter().position(|e| e.name == name)
    }

    pub fn name_of(&self, v: VarRef) -> &str {
        match v {
            VarRef::Unknown(i) => &self.unknowns[i].name,
            VarRef::Param(i) => &self.parameters[i].name,
        }
    }

    pub fn domain_of(&self, unknown: usize) -> (f64, f64) {
        self.unknowns[unknown].domain.unwrap_or(DEFAULT_DOMAIN)
    }

    pub fn parameter_values<T: Scalar>(&self) -> Vec<T> {
        self.parameters.iter().map(|p| T::lit(p.value)).collect()
    }

    /// Evaluates every expression equation's residual with unknowns given by
    /// name. Structural equations are skipped.
    pub fn residuals_by_name(
        &self,
        values: &BTreeMap<String, f64>,
    ) -> Result<Vec<(String, f64)>, EvalError> {
        let unknowns: Vec<f64> = self
            .unknowns
            .iter()
            .map(|u| values.get(&u.name).copied().unwrap_or(f64::NAN))
            .collect();
        let params = self.parameter_values::<f64>();
        let env = Env::new(&unknowns, &params);
        self.equations
            .iter()
            .filter_map(|eq| eq.residual().map(|e| (eq, e)))
            .map(|(eq, e)| Ok((eq.name.clone(), e.evaluate(&env)?)))
            .collect()
    }

    /// Renders the system back into the textual format.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        if !self.unknowns.is_empty() {
            let names: Vec<&str> = self.unknowns.iter().map(|u| u.name.as_str()).collect();
            let _ = writeln!(out, "var {}", names.join(" "));
        }
        for p in &self.parameters {
            let _ = writeln!(out, "param {}={:?}", p.name, p.value);
        }
        for u in &self.unknowns {
            if let Some((lo, hi)) = u.domain {
                let _ = writeln!(out, "domain {} in [{:?}, {:?}]", u.name, lo, hi);
            }
        }
        let names = |v: VarRef| self.name_of(v).to_string();
        for eq in &self.equations {
            match &eq.body {
                EquationBody::Expression(e) => {
                    let _ = writeln!(out, "eq {}: {} = 0", eq.name, e.display_with(&names));
                }
                EquationBody::Uses(xs) => {
                    let used: Vec<&str> = xs.iter().map(|&x| self.unknowns[x].name.as_str()).collect();
                    let _ = writeln!(out, "eq {}: uses {}", eq.name, used.join(" "));
                }
            }
        }
        out
    }
}
