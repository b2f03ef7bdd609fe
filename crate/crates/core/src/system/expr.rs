use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use thiserror::Error;

use super::interval::{Interval, IntervalError};
use crate::scalar::Scalar;

/// Reference to a declared symbol: an unknown or a fixed parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarRef {
    Unknown(usize),
    Param(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }
}

/// Expression tree. Exponents are integer literals.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(VarRef),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero in `{0}`")]
    DivisionByZero(String),
    #[error("square root of negative value in `{0}`")]
    NegativeSqrt(String),
    #[error("variable {0:?} is not bound")]
    Unbound(VarRef),
}

/// Values for every symbol, indexed by unknown and parameter position.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a, V> {
    pub unknowns: &'a [V],
    pub params: &'a [V],
}

impl<'a, V: Copy> Env<'a, V> {
    pub fn new(unknowns: &'a [V], params: &'a [V]) -> Self {
        Self { unknowns, params }
    }

    fn get(&self, v: VarRef) -> Option<V> {
        match v {
            VarRef::Unknown(i) => self.unknowns.get(i).copied(),
            VarRef::Param(i) => self.params.get(i).copied(),
        }
    }
}

impl Expr {
    pub fn var(v: VarRef) -> Self {
        Expr::Var(v)
    }

    pub fn unknown(i: usize) -> Self {
        Expr::Var(VarRef::Unknown(i))
    }

    pub fn param(i: usize) -> Self {
        Expr::Var(VarRef::Param(i))
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Self {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Self {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn pow(base: Expr, n: i32) -> Self {
        Expr::Pow(Box::new(base), n)
    }

    /// Calls `f` on every variable occurrence, left to right.
    pub fn visit_vars(&self, f: &mut impl FnMut(VarRef)) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(v) => f(*v),
            Expr::Unary(_, a) | Expr::Pow(a, _) => a.visit_vars(f),
            Expr::Binary(_, a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Unknowns syntactically occurring in the expression.
    pub fn unknowns(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            if let VarRef::Unknown(i) = v {
                out.insert(i);
            }
        });
        out
    }

    pub fn mentions(&self, target: VarRef) -> bool {
        let mut hit = false;
        self.visit_vars(&mut |v| hit |= v == target);
        hit
    }

    /// Point evaluation.
    pub fn evaluate<T: Scalar>(&self, env: &Env<'_, T>) -> Result<T, EvalError> {
        Ok(match self {
            Expr::Const(c) => T::lit(*c),
            Expr::Var(v) => env.get(*v).ok_or(EvalError::Unbound(*v))?,
            Expr::Unary(op, a) => {
                let a = a.evaluate(env)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Sqrt => {
                        if a < T::zero() {
                            return Err(EvalError::NegativeSqrt(self.to_string()));
                        }
                        a.sqrt()
                    }
                }
            }
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.evaluate(env)?, b.evaluate(env)?);
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == T::zero() {
                            return Err(EvalError::DivisionByZero(self.to_string()));
                        }
                        a / b
                    }
                }
            }
            Expr::Pow(a, n) => {
                let a = a.evaluate(env)?;
                if *n < 0 && a == T::zero() {
                    return Err(EvalError::DivisionByZero(self.to_string()));
                }
                a.powi(*n)
            }
        })
    }

    /// Interval extension: encloses the range of the expression over the box
    /// given by `env`.
    pub fn interval_evaluate<T: Scalar>(
        &self,
        env: &Env<'_, Interval<T>>,
    ) -> Result<Interval<T>, IntervalEvalError> {
        Ok(match self {
            Expr::Const(c) => Interval::point(T::lit(*c)),
            Expr::Var(v) => env.get(*v).ok_or(IntervalEvalError::Unbound(*v))?,
            Expr::Unary(op, a) => {
                let a = a.interval_evaluate(env)?;
                match op {
                    UnaryOp::Neg => -a,
                    UnaryOp::Sin => a.sin(),
                    UnaryOp::Cos => a.cos(),
                    UnaryOp::Sqrt => a.sqrt(),
                }
            }
            Expr::Binary(op, a, b) => {
                let (a, b) = (a.interval_evaluate(env)?, b.interval_evaluate(env)?);
                match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => a.checked_div(b)?,
                }
            }
            Expr::Pow(a, n) => a.interval_evaluate(env)?.powi(*n)?,
        })
    }

    /// Renders with the given symbol names. Binary operations are fully
    /// parenthesized so the text parses back to the same tree.
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(VarRef) -> String) -> impl fmt::Display + 'a {
        Rendered { expr: self, names }
    }

    fn render(&self, out: &mut String, names: &dyn Fn(VarRef) -> String) {
        match self {
            Expr::Const(c) => {
                if *c < 0.0 {
                    let _ = write!(out, "(-{})", -c);
                } else {
                    let _ = write!(out, "{c}");
                }
            }
            Expr::Var(v) => out.push_str(&names(*v)),
            Expr::Unary(UnaryOp::Neg, a) if matches!(**a, Expr::Const(c) if c >= 0.0) => {
                out.push_str("(-(");
                a.render(out, names);
                out.push_str("))");
            }
            Expr::Unary(UnaryOp::Neg, a) => {
                out.push_str("(-");
                a.render(out, names);
                out.push(')');
            }
            Expr::Unary(op, a) => {
                out.push_str(match op {
                    UnaryOp::Sin => "sin(",
                    UnaryOp::Cos => "cos(",
                    _ => "sqrt(",
                });
                a.render(out, names);
                out.push(')');
            }
            Expr::Binary(op, a, b) => {
                out.push('(');
                a.render(out, names);
                let _ = write!(out, " {} ", op.symbol());
                b.render(out, names);
                out.push(')');
            }
            Expr::Pow(a, n) => {
                if matches!(**a, Expr::Pow(..)) {
                    out.push('(');
                    a.render(out, names);
                    out.push(')');
                } else {
                    a.render(out, names);
                }
                let _ = write!(out, "^{n}");
            }
        }
    }
}

fn default_name(v: VarRef) -> String {
    match v {
        VarRef::Unknown(i) => format!("u{i}"),
        VarRef::Param(i) => format!("p{i}"),
    }
}

struct Rendered<'a> {
    expr: &'a Expr,
    names: &'a dyn Fn(VarRef) -> String,
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.expr.render(&mut s, self.names);
        f.write_str(&s)
    }
}

/// Renders unknowns as `u<i>` and parameters as `p<i>`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.render(&mut s, &default_name);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalEvalError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("variable {0:?} is not bound")]
    Unbound(VarRef),
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::unknown(0)
    }
    fn y() -> Expr {
        Expr::unknown(1)
    }
    fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    #[test]
    fn point_evaluation() {
        let e = Expr::binary(BinaryOp::Sub, x(), c(3.0));
        assert_eq!(e.evaluate(&Env::new(&[3.0], &[])).unwrap(), 0.0);
        // (xC - 0)^2 + (yC - 0)^2 - 25 at (3, 4)
        let sq = |v: Expr| Expr::pow(Expr::binary(BinaryOp::Sub, v, c(0.0)), 2);
        let e = Expr::binary(
            BinaryOp::Sub,
            Expr::binary(BinaryOp::Add, sq(x()), sq(y())),
            c(25.0),
        );
        assert_eq!(e.evaluate(&Env::new(&[3.0, 4.0], &[])).unwrap(), 0.0);
    }

    #[test]
    fn division_by_zero_names_node() {
        let e = Expr::binary(BinaryOp::Div, x(), y());
        let err = e.evaluate(&Env::new(&[1.0, 0.0], &[])).unwrap_err();
        assert_eq!(err, EvalError::DivisionByZero("(u0 / u1)".into()));
    }

    #[test]
    fn negative_sqrt_is_an_error() {
        let e = Expr::unary(UnaryOp::Sqrt, x());
        assert!(matches!(
            e.evaluate(&Env::new(&[-1.0], &[])),
            Err(EvalError::NegativeSqrt(_))
        ));
    }

    #[test]
    fn interval_examples() {
        let b = [Interval::new(-2.0, 3.0)];
        let r = Expr::pow(x(), 2).interval_evaluate(&Env::new(&b, &[])).unwrap();
        assert!(r.contains(0.0) && r.contains(9.0) && r.lo() <= 0.0);
        let b = [Interval::new(0.0, 1.0)];
        let r = Expr::binary(BinaryOp::Sub, x(), x())
            .interval_evaluate(&Env::new(&b, &[]))
            .unwrap();
        assert!(r.contains(-1.0) && r.contains(1.0));
        let b = [Interval::new(0.0, std::f64::consts::PI)];
        let r = Expr::unary(UnaryOp::Sin, x()).interval_evaluate(&Env::new(&b, &[])).unwrap();
        assert!(r.contains(0.0) && r.contains(1.0) && r.lo() > -1e-12);
    }

    #[test]
    fn interval_division_signals_split() {
        let b = [Interval::new(1.0, 2.0), Interval::new(-1.0, 1.0)];
        let err = Expr::binary(BinaryOp::Div, x(), y())
            .interval_evaluate(&Env::new(&b, &[]))
            .unwrap_err();
        assert_eq!(err, IntervalEvalError::Interval(IntervalError::DivisionByZero));
    }

    #[test]
    fn rendering_parenthesizes_nested_powers() {
        let e = Expr::pow(Expr::pow(x(), 2), 3);
        assert_eq!(e.to_string(), "(u0^2)^3");
        let e = Expr::unary(UnaryOp::Neg, Expr::pow(x(), -2));
        assert_eq!(e.to_string(), "(-u0^-2)");
    }
}
