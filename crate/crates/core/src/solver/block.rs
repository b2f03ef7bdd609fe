use crate::scalar::Scalar;
use crate::system::{differentiate, Env, EquationSystem, Expr, Interval, VarRef};

use super::linalg::invert;
use super::{SolveError, SolverConfig};

/// Axis-aligned box over the unknowns of one block.
pub type IntervalBox<T> = Vec<Interval<T>>;

/// A square block of equations with its symbolic Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockProblem {
    /// Global equation indices.
    pub equations: Vec<usize>,
    /// Global unknown indices, in box coordinate order.
    pub unknowns: Vec<usize>,
    pub residuals: Vec<Expr>,
    /// `jacobian[i][j] = ∂residuals[i] / ∂unknowns[j]`.
    pub jacobian: Vec<Vec<Expr>>,
}

impl BlockProblem {
    pub fn new(system: &EquationSystem, equations: &[usize], unknowns: &[usize]) -> Result<Self, SolveError> {
        if equations.len() != unknowns.len() {
            return Err(SolveError::NotSquare {
                equations: equations.len(),
                unknowns: unknowns.len(),
            });
        }
        let residuals = equations
            .iter()
            .map(|&i| {
                system.equations[i]
                    .residual()
                    .cloned()
                    .ok_or(SolveError::StructuralOnly)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_residuals(equations.to_vec(), unknowns.to_vec(), residuals))
    }

    pub fn from_residuals(equations: Vec<usize>, unknowns: Vec<usize>, residuals: Vec<Expr>) -> Self {
        let jacobian = residuals
            .iter()
            .map(|r| {
                unknowns
                    .iter()
                    .map(|&x| differentiate(r, VarRef::Unknown(x)))
                    .collect()
            })
            .collect();
        Self {
            equations,
            unknowns,
            residuals,
            jacobian,
        }
    }

    pub fn dimension(&self) -> usize {
        self.unknowns.len()
    }
}

/// Values of everything outside the block: upstream unknowns (`None` while
/// unsolved) and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Bindings<T> {
    pub unknowns: Vec<Option<T>>,
    pub params: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome<T: Scalar> {
    /// No root in the box.
    Empty,
    /// The operator maps the box strictly inside itself: exactly one root,
    /// enclosed by the returned box.
    Unique(IntervalBox<T>),
    /// Roots, if any, lie in the returned strictly smaller box.
    Shrunk(IntervalBox<T>),
    NoProgress,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSolution<T: Scalar> {
    /// Midpoint of the enclosure, per block unknown.
    pub point: Vec<T>,
    pub enclosure: IntervalBox<T>,
    pub certified_unique: bool,
}

/// Evaluation environment with the non-block variables fixed.
struct Context<'a, T: Scalar> {
    problem: &'a BlockProblem,
    points: Vec<T>,
    boxes: Vec<Interval<T>>,
    params: Vec<T>,
    param_boxes: Vec<Interval<T>>,
}

impl<'a, T: Scalar> Context<'a, T> {
    fn new(problem: &'a BlockProblem, bindings: &Bindings<T>) -> Result<Self, SolveError> {
        let n = problem.dimension();
        if problem.residuals.len() != n || problem.jacobian.len() != n {
            return Err(SolveError::NotSquare {
                equations: problem.residuals.len(),
                unknowns: n,
            });
        }
        let in_block = |x: usize| problem.unknowns.contains(&x);
        let mut missing = Vec::new();
        for r in &problem.residuals {
            r.visit_vars(&mut |v| {
                let bound = match v {
                    VarRef::Unknown(x) => in_block(x) || bindings.unknowns.get(x).is_some_and(Option::is_some),
                    VarRef::Param(p) => p < bindings.params.len(),
                };
                if !bound && !missing.contains(&v) {
                    missing.push(v);
                }
            });
        }
        if !missing.is_empty() {
            missing.sort();
            return Err(SolveError::UnboundVariables(missing));
        }
        let width = bindings
            .unknowns
            .len()
            .max(problem.unknowns.iter().map(|x| x + 1).max().unwrap_or(0));
        let points: Vec<T> = (0..width)
            .map(|x| bindings.unknowns.get(x).copied().flatten().unwrap_or(T::nan()))
            .collect();
        Ok(Self {
            problem,
            boxes: points.iter().map(|&v| Interval::point(v)).collect(),
            points,
            param_boxes: bindings.params.iter().map(|&v| Interval::point(v)).collect(),
            params: bindings.params.clone(),
        })
    }

    fn load_box(&mut self, x: &[Interval<T>]) {
        for (&u, &iv) in self.problem.unknowns.iter().zip(x) {
            self.boxes[u] = iv;
        }
    }

    fn load_point(&mut self, y: &[T]) {
        for (&u, &v) in self.problem.unknowns.iter().zip(y) {
            self.points[u] = v;
            self.boxes[u] = Interval::point(v);
        }
    }

    fn interval_env(&self) -> Env<'_, Interval<T>> {
        Env::new(&self.boxes, &self.param_boxes)
    }

    fn point_env(&self) -> Env<'_, T> {
        Env::new(&self.points, &self.params)
    }

    /// True when some residual provably has no zero on the box.
    fn excludes(&mut self, x: &[Interval<T>]) -> bool {
        self.load_box(x);
        let env = self.interval_env();
        self.problem
            .residuals
            .iter()
            .any(|r| matches!(r.interval_evaluate(&env), Ok(v) if !v.contains_zero()))
    }

    /// Largest |f_i| at a point, or `None` if some residual is undefined there.
    fn max_residual(&mut self, y: &[T]) -> Option<T> {
        self.load_point(y);
        let env = self.point_env();
        let mut worst = T::zero();
        for r in &self.problem.residuals {
            let v = r.evaluate(&env).ok()?;
            if !v.is_finite() {
                return None;
            }
            worst = worst.max(v.abs());
        }
        Some(worst)
    }

    fn step(&mut self, x: &[Interval<T>]) -> StepOutcome<T> {
        let n = self.problem.dimension();
        let y: Vec<T> = x.iter().map(Interval::mid).collect();

        // f(y) as thin intervals and the midpoint Jacobian
        self.load_point(&y);
        let mut fy = Vec::with_capacity(n);
        let mut jy = vec![vec![T::zero(); n]; n];
        {
            let ienv = self.interval_env();
            let penv = self.point_env();
            for (i, r) in self.problem.residuals.iter().enumerate() {
                match r.interval_evaluate(&ienv) {
                    Ok(v) => fy.push(v),
                    Err(_) => return StepOutcome::NoProgress,
                }
                for (j, d) in self.problem.jacobian[i].iter().enumerate() {
                    match d.evaluate(&penv) {
                        Ok(v) if v.is_finite() => jy[i][j] = v,
                        _ => return StepOutcome::NoProgress,
                    }
                }
            }
        }
        let Some(inv) = invert(&jy) else {
            return StepOutcome::NoProgress;
        };

        self.load_box(x);
        let mut jx = vec![vec![Interval::point(T::zero()); n]; n];
        {
            let env = self.interval_env();
            for (i, row) in self.problem.jacobian.iter().enumerate() {
                for (j, d) in row.iter().enumerate() {
                    match d.interval_evaluate(&env) {
                        Ok(v) => jx[i][j] = v,
                        Err(_) => return StepOutcome::NoProgress,
                    }
                }
            }
        }

        let offsets: Vec<Interval<T>> = x.iter().zip(&y).map(|(&xi, &yi)| xi - Interval::point(yi)).collect();
        let mut k = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Interval::point(y[i]);
            for j in 0..n {
                acc = acc - Interval::point(inv[i][j]) * fy[j];
            }
            for j in 0..n {
                let mut m = Interval::point(if i == j { T::one() } else { T::zero() });
                for (l, row) in jx.iter().enumerate() {
                    m = m - Interval::point(inv[i][l]) * row[j];
                }
                acc = acc + m * offsets[j];
            }
            k.push(acc);
        }

        if k.iter().zip(x).all(|(ki, xi)| ki.is_interior_of(xi)) {
            return StepOutcome::Unique(k);
        }
        let cut: IntervalBox<T> = k.iter().zip(x).map(|(ki, xi)| ki.intersect(xi)).collect();
        if cut.iter().any(Interval::is_empty) {
            return StepOutcome::Empty;
        }
        if cut.iter().zip(x).any(|(c, xi)| c.width() < xi.width()) {
            StepOutcome::Shrunk(cut)
        } else {
            StepOutcome::NoProgress
        }
    }
}

fn max_width<T: Scalar>(x: &[Interval<T>]) -> T {
    x.iter().map(Interval::width).fold(T::zero(), T::max)
}

/// One application of the Krawczyk operator
/// `K(y, X) = y − Y f(y) + (I − Y F′(X))(X − y)`, with `y` the midpoint of
/// `X` and `Y` the inverse of the Jacobian at `y`.
pub fn krawczyk_step<T: Scalar>(
    problem: &BlockProblem,
    bindings: &Bindings<T>,
    x: &[Interval<T>],
) -> Result<StepOutcome<T>, SolveError> {
    if x.len() != problem.dimension() {
        return Err(SolveError::DimensionMismatch {
            expected: problem.dimension(),
            found: x.len(),
        });
    }
    let mut ctx = Context::new(problem, bindings)?;
    Ok(ctx.step(x))
}

/// All roots of the block inside `initial`, by branch-and-prune bisection.
pub fn solve_block<T: Scalar>(
    problem: &BlockProblem,
    bindings: &Bindings<T>,
    initial: &[Interval<T>],
    config: &SolverConfig<T>,
) -> Result<Vec<BlockSolution<T>>, SolveError> {
    if initial.len() != problem.dimension() {
        return Err(SolveError::DimensionMismatch {
            expected: problem.dimension(),
            found: initial.len(),
        });
    }
    if initial.iter().any(|iv| iv.is_empty() || !iv.lo().is_finite() || !iv.hi().is_finite()) {
        return Err(SolveError::InvalidBox);
    }
    let mut ctx = Context::new(problem, bindings)?;
    let tol = config.tol_width;
    let mut stack: Vec<IntervalBox<T>> = vec![initial.to_vec()];
    let mut processed = 0usize;
    let mut found: Vec<BlockSolution<T>> = Vec::new();

    while let Some(mut x) = stack.pop() {
        processed += 1;
        if processed > config.max_boxes {
            stack.push(x);
            return Err(budget_error(config.max_boxes, &stack));
        }
        loop {
            if ctx.excludes(&x) {
                break;
            }
            let narrow = max_width(&x) <= tol;
            match ctx.step(&x) {
                StepOutcome::Empty => break,
                StepOutcome::Unique(k) => {
                    if let Some(s) = refine(&mut ctx, k, tol) {
                        found.push(s);
                    }
                    break;
                }
                StepOutcome::Shrunk(k) if !narrow => {
                    let progress = k
                        .iter()
                        .zip(&x)
                        .any(|(a, b)| a.width() <= b.width() * T::lit(0.9));
                    x = k;
                    if !progress {
                        push_halves(&mut stack, &x);
                        break;
                    }
                }
                StepOutcome::NoProgress if !narrow => {
                    push_halves(&mut stack, &x);
                    break;
                }
                StepOutcome::Shrunk(k) => {
                    accept_uncertified(&mut ctx, k, config, &mut found);
                    break;
                }
                StepOutcome::NoProgress => {
                    accept_uncertified(&mut ctx, x, config, &mut found);
                    break;
                }
            }
        }
    }
    Ok(merge(found, tol))
}

fn accept_uncertified<T: Scalar>(
    ctx: &mut Context<'_, T>,
    x: IntervalBox<T>,
    config: &SolverConfig<T>,
    found: &mut Vec<BlockSolution<T>>,
) {
    let point: Vec<T> = x.iter().map(Interval::mid).collect();
    if ctx.max_residual(&point).is_some_and(|r| r <= config.tol_residual) {
        found.push(BlockSolution {
            point,
            enclosure: x,
            certified_unique: false,
        });
    }
}

/// Iterates the operator on a certified box until it is narrow enough or
/// stops contracting.
fn refine<T: Scalar>(ctx: &mut Context<'_, T>, mut k: IntervalBox<T>, tol: T) -> Option<BlockSolution<T>> {
    for _ in 0..100 {
        if max_width(&k) <= tol {
            break;
        }
        match ctx.step(&k) {
            StepOutcome::Unique(next) | StepOutcome::Shrunk(next) => {
                if max_width(&next) >= max_width(&k) {
                    break;
                }
                k = next;
            }
            StepOutcome::Empty => return None,
            StepOutcome::NoProgress => break,
        }
    }
    Some(BlockSolution {
        point: k.iter().map(Interval::mid).collect(),
        enclosure: k,
        certified_unique: true,
    })
}

fn push_halves<T: Scalar>(stack: &mut Vec<IntervalBox<T>>, x: &[Interval<T>]) {
    let (axis, _) = x
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |best, (i, iv)| {
            if iv.width() > best.1 {
                (i, iv.width())
            } else {
                best
            }
        });
    let (lo, hi) = x[axis].bisect();
    let mut upper = x.to_vec();
    upper[axis] = hi;
    let mut lower = x.to_vec();
    lower[axis] = lo;
    stack.push(upper);
    stack.push(lower);
}

fn budget_error<T: Scalar>(limit: usize, pending: &[IntervalBox<T>]) -> SolveError {
    let mut hull = pending[0].clone();
    for b in &pending[1..] {
        for (h, iv) in hull.iter_mut().zip(b) {
            *h = h.hull(iv);
        }
    }
    SolveError::BudgetExceeded {
        limit,
        pending: pending.len(),
        region: hull
            .iter()
            .map(|iv| (iv.lo().to_f64().unwrap_or(f64::NAN), iv.hi().to_f64().unwrap_or(f64::NAN)))
            .collect(),
    }
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.to_f64().unwrap_or(f64::NAN).total_cmp(&y.to_f64().unwrap_or(f64::NAN));
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Collapses solutions whose midpoints are within `10·tol` in every
/// coordinate, keeping a certified one when there is one, and sorts the rest
/// lexicographically.
fn merge<T: Scalar>(mut found: Vec<BlockSolution<T>>, tol: T) -> Vec<BlockSolution<T>> {
    found.sort_by(|a, b| lex_cmp(&a.point, &b.point).then(b.certified_unique.cmp(&a.certified_unique)));
    let radius = tol * T::lit(10.0);
    let mut out: Vec<BlockSolution<T>> = Vec::new();
    for s in found {
        let dup = out.iter_mut().find(|o| {
            o.point
                .iter()
                .zip(&s.point)
                .all(|(a, b)| (*a - *b).abs() < radius)
        });
        match dup {
            Some(o) if s.certified_unique && !o.certified_unique => *o = s,
            Some(_) => {}
            None => out.push(s),
        }
    }
    out.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    out
}
