use std::collections::BTreeMap;

use crate::decomposition::ResolutionPlan;
use crate::scalar::Scalar;
use crate::system::{Env, EquationSystem, Interval, VarRef};

use super::block::{solve_block, BlockProblem, Bindings};
use super::{SolveError, SolverConfig};

/// One complete assignment of the system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSolution<T> {
    /// Every unknown in declaration order, free parameters included.
    pub assignment: Vec<(String, T)>,
    /// `|f_i|` for every equation in declaration order, discarded ones included.
    pub residuals: Vec<(String, T)>,
    /// Every discarded equation holds within `tol_residual`.
    pub discarded_ok: bool,
    /// Every block solution carried a uniqueness certificate.
    pub certified: bool,
}

impl<T: Scalar> SystemSolution<T> {
    pub fn values(&self) -> Vec<T> {
        self.assignment.iter().map(|(_, v)| *v).collect()
    }

    pub fn value(&self, name: &str) -> Option<T> {
        self.assignment.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }
}

fn parameters_with_overrides<T: Scalar>(
    system: &EquationSystem,
    overrides: &BTreeMap<String, f64>,
    free: &[usize],
) -> Result<(Vec<T>, Vec<Option<T>>), SolveError> {
    let mut params: Vec<T> = system.parameter_values();
    let mut unknowns: Vec<Option<T>> = vec![None; system.unknowns.len()];
    for (name, &value) in overrides {
        match system.lookup(name) {
            Some(VarRef::Param(p)) => params[p] = T::lit(value),
            Some(VarRef::Unknown(x)) if free.contains(&x) => unknowns[x] = Some(T::lit(value)),
            _ => return Err(SolveError::NotOverridable(name.clone())),
        }
    }
    let unbound: Vec<String> = free
        .iter()
        .filter(|&&x| unknowns[x].is_none())
        .map(|&x| system.unknowns[x].name.clone())
        .collect();
    if !unbound.is_empty() {
        return Err(SolveError::UnboundParameters(unbound));
    }
    Ok((params, unknowns))
}

fn initial_box<T: Scalar>(system: &EquationSystem, unknowns: &[usize]) -> Vec<Interval<T>> {
    unknowns
        .iter()
        .map(|&x| {
            let (lo, hi) = system.domain_of(x);
            Interval::new(T::lit(lo), T::lit(hi))
        })
        .collect()
}

fn finish<T: Scalar>(
    system: &EquationSystem,
    bindings: &Bindings<T>,
    discarded: &[usize],
    certified: bool,
    config: &SolverConfig<T>,
) -> SystemSolution<T> {
    let values: Vec<T> = bindings
        .unknowns
        .iter()
        .map(|v| v.expect("every unknown is bound at a leaf"))
        .collect();
    let env = Env::new(&values, &bindings.params);
    let residuals: Vec<(String, T)> = system
        .equations
        .iter()
        .map(|eq| {
            let r = eq
                .residual()
                .and_then(|e| e.evaluate(&env).ok())
                .map_or(T::infinity(), |v| if v.is_nan() { T::infinity() } else { v.abs() });
            (eq.name.clone(), r)
        })
        .collect();
    let discarded_ok = discarded.iter().all(|&i| residuals[i].1 <= config.tol_residual);
    SystemSolution {
        assignment: system
            .unknowns
            .iter()
            .zip(values)
            .map(|(u, v)| (u.name.clone(), v))
            .collect(),
        residuals,
        discarded_ok,
        certified,
    }
}

/// Solves the plan's blocks in order, branching over every solution of each
/// block. Upstream values enter downstream blocks as exact points.
pub fn execute_plan<T: Scalar>(
    plan: &ResolutionPlan,
    system: &EquationSystem,
    overrides: &BTreeMap<String, f64>,
    config: &SolverConfig<T>,
) -> Result<Vec<SystemSolution<T>>, SolveError> {
    execute_plan_observed(plan, system, overrides, config, &mut |_, _| {})
}

/// [`execute_plan`], calling `observer(block, bound)` right before each block
/// is solved; `bound[x]` tells whether unknown `x` has a value at that point.
pub fn execute_plan_observed<T: Scalar>(
    plan: &ResolutionPlan,
    system: &EquationSystem,
    overrides: &BTreeMap<String, f64>,
    config: &SolverConfig<T>,
    observer: &mut dyn FnMut(usize, &[bool]),
) -> Result<Vec<SystemSolution<T>>, SolveError> {
    if system.structural_only {
        return Err(SolveError::StructuralOnly);
    }
    let free: Vec<usize> = plan.free_parameters.iter().copied().collect();
    let (params, unknowns) = parameters_with_overrides::<T>(system, overrides, &free)?;
    let problems = plan
        .blocks
        .iter()
        .map(|b| {
            let eqs: Vec<usize> = b.equations.iter().copied().collect();
            let xs: Vec<usize> = b.unknowns.iter().copied().collect();
            BlockProblem::new(system, &eqs, &xs)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let boxes: Vec<_> = problems.iter().map(|p| initial_box::<T>(system, &p.unknowns)).collect();
    let discarded: Vec<usize> = plan.discarded_equations.iter().copied().collect();

    let mut run = Run {
        system,
        problems: &problems,
        boxes: &boxes,
        discarded: &discarded,
        config,
        observer,
        out: Vec::new(),
    };
    let mut bindings = Bindings { unknowns, params };
    run.descend(0, &mut bindings, true)?;
    Ok(run.out)
}

struct Run<'a, T: Scalar> {
    system: &'a EquationSystem,
    problems: &'a [BlockProblem],
    boxes: &'a [Vec<Interval<T>>],
    discarded: &'a [usize],
    config: &'a SolverConfig<T>,
    observer: &'a mut dyn FnMut(usize, &[bool]),
    out: Vec<SystemSolution<T>>,
}

impl<T: Scalar> Run<'_, T> {
    fn descend(&mut self, k: usize, bindings: &mut Bindings<T>, certified: bool) -> Result<(), SolveError> {
        if k == self.problems.len() {
            self.out
                .push(finish(self.system, bindings, self.discarded, certified, self.config));
            return Ok(());
        }
        let bound: Vec<bool> = bindings.unknowns.iter().map(Option::is_some).collect();
        (self.observer)(k, &bound);
        let problem = &self.problems[k];
        let solutions = solve_block(problem, bindings, &self.boxes[k], self.config)?;
        for s in solutions {
            for (&x, &v) in problem.unknowns.iter().zip(&s.point) {
                bindings.unknowns[x] = Some(v);
            }
            self.descend(k + 1, bindings, certified && s.certified_unique)?;
        }
        for &x in &problem.unknowns {
            bindings.unknowns[x] = None;
        }
        Ok(())
    }
}

/// Solves the whole system as a single block. Only parameters may be
/// overridden.
pub fn solve_monolithic<T: Scalar>(
    system: &EquationSystem,
    overrides: &BTreeMap<String, f64>,
    config: &SolverConfig<T>,
) -> Result<Vec<SystemSolution<T>>, SolveError> {
    if system.structural_only {
        return Err(SolveError::StructuralOnly);
    }
    let n = system.equations.len();
    if n != system.unknowns.len() {
        return Err(SolveError::NotSquare {
            equations: n,
            unknowns: system.unknowns.len(),
        });
    }
    let (params, unknowns) = parameters_with_overrides::<T>(system, overrides, &[])?;
    let all: Vec<usize> = (0..n).collect();
    let problem = BlockProblem::new(system, &all, &all)?;
    let mut bindings = Bindings { unknowns, params };
    if n == 0 {
        return Ok(vec![finish(system, &bindings, &[], true, config)]);
    }
    let solutions = solve_block(&problem, &bindings, &initial_box::<T>(system, &all), config)?;
    Ok(solutions
        .into_iter()
        .map(|s| {
            for (x, &v) in s.point.iter().enumerate() {
                bindings.unknowns[x] = Some(v);
            }
            finish(system, &bindings, &[], s.certified_unique, config)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::resolution_plan;
    use crate::system::parse_system;

    fn plan_and_solve(text: &str, overrides: &[(&str, f64)]) -> Result<Vec<SystemSolution<f64>>, SolveError> {
        let s = parse_system(text).unwrap();
        let plan = resolution_plan(&s.graph().unwrap());
        let o = overrides.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        execute_plan(&plan, &s, &o, &SolverConfig::default())
    }

    const POINT_C: &str = "var xC yC\nparam xA=0 yA=0 xB=10 yB=0\n\
        eq dAC: (xC-xA)^2 + (yC-yA)^2 = 169\n\
        eq dBC: (xC-xB)^2 + (yC-yB)^2 = 169\n";

    #[test]
    fn substitution_chain() {
        let sols = plan_and_solve("var x0 x1\neq y0: x0 - 1 = 0\neq y1: x1 - x0 = 0", &[]).unwrap();
        assert_eq!(sols.len(), 1);
        assert!((sols[0].value("x0").unwrap() - 1.0).abs() < 1e-9);
        assert!((sols[0].value("x1").unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn point_c_two_ways() {
        let sols = plan_and_solve(POINT_C, &[]).unwrap();
        assert_eq!(sols.len(), 2);
        let ys: Vec<f64> = sols.iter().map(|s| s.value("yC").unwrap()).collect();
        assert!((ys[0] + 12.0).abs() < 1e-8 && (ys[1] - 12.0).abs() < 1e-8);
        let s = parse_system(POINT_C).unwrap();
        let mono = solve_monolithic::<f64>(&s, &BTreeMap::new(), &SolverConfig::default()).unwrap();
        assert_eq!(mono.len(), 2);
        for (a, b) in sols.iter().zip(&mono) {
            for (x, y) in a.values().iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn redundant_and_contradictory_extra_equation() {
        let ok = plan_and_solve("var x\neq a: x - 1 = 0\neq b: 2*x - 2 = 0", &[]).unwrap();
        assert_eq!(ok.len(), 1);
        assert!(ok[0].discarded_ok);
        let bad = plan_and_solve("var x\neq a: x - 1 = 0\neq b: 2*x - 3 = 0", &[]).unwrap();
        assert_eq!(bad.len(), 1);
        assert!(!bad[0].discarded_ok);
        assert!(bad[0].residuals[1].1 > 0.5);
    }

    #[test]
    fn free_unknowns_must_be_bound() {
        let text = "var x y\nparam r=2\neq c: x^2 + y^2 = r^2";
        let err = plan_and_solve(text, &[]).unwrap_err();
        assert!(matches!(err, SolveError::UnboundParameters(ref v) if v.len() == 1));
        let SolveError::UnboundParameters(names) = err else { unreachable!() };
        let sols = plan_and_solve(text, &[(names[0].as_str(), 0.0)]).unwrap();
        assert_eq!(sols.len(), 2);
        assert!(matches!(
            plan_and_solve(text, &[(names[0].as_str(), 0.0), ("nope", 1.0)]),
            Err(SolveError::NotOverridable(_))
        ));
        // overriding a declared parameter
        let sols = plan_and_solve(text, &[(names[0].as_str(), 0.0), ("r", 3.0)]).unwrap();
        assert!(sols.iter().all(|s| s.values().iter().any(|v| (v.abs() - 3.0).abs() < 1e-8)));
    }

    #[test]
    fn dead_branch_gives_no_solutions() {
        let sols = plan_and_solve("var x y\neq a: x^2 - 1 = 0\neq b: y^2 + x + 2 = 0", &[]).unwrap();
        assert!(sols.is_empty());
    }

    #[test]
    fn structural_systems_are_rejected() {
        assert_eq!(plan_and_solve("var x\neq a: uses x", &[]).unwrap_err(), SolveError::StructuralOnly);
    }

    #[test]
    fn observer_sees_dependencies_bound() {
        let s = parse_system("var a b c\neq e2: c - a*b = 0\neq e0: a - 2 = 0\neq e1: b^2 - a = 0").unwrap();
        let plan = resolution_plan(&s.graph().unwrap());
        let mut seen = Vec::new();
        let sols = execute_plan_observed(&plan, &s, &BTreeMap::new(), &SolverConfig::<f64>::default(), &mut |k, bound| {
            seen.push(k);
            for d in plan.dependencies_of(k) {
                assert!(plan.blocks[d].unknowns.iter().all(|&x| bound[x]));
            }
        })
        .unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(seen, vec![0, 1, 2, 2]);
    }
}
