//! Symbolic partial derivatives with light constant folding.

use super::expr::{BinaryOp, Expr, UnaryOp, VarRef};

fn is_const(e: &Expr, v: f64) -> bool {
    matches!(e, Expr::Const(c) if *c == v)
}

fn add(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => b,
        _ if is_const(&b, 0.0) => a,
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x + y),
        _ => Expr::binary(BinaryOp::Add, a, b),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&b, 0.0) => a,
        _ if is_const(&a, 0.0) => neg(b),
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x - y),
        _ => Expr::binary(BinaryOp::Sub, a, b),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&a, 0.0) || is_const(&b, 0.0) => Expr::Const(0.0),
        _ if is_const(&a, 1.0) => b,
        _ if is_const(&b, 1.0) => a,
        (Expr::Const(x), Expr::Const(y)) => Expr::Const(x * y),
        _ => Expr::binary(BinaryOp::Mul, a, b),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (&a, &b) {
        _ if is_const(&a, 0.0) => Expr::Const(0.0),
        _ if is_const(&b, 1.0) => a,
        _ => Expr::binary(BinaryOp::Div, a, b),
    }
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Unary(UnaryOp::Neg, inner) => *inner,
        other => Expr::unary(UnaryOp::Neg, other),
    }
}

fn pow(a: Expr, n: i32) -> Expr {
    match n {
        0 => Expr::Const(1.0),
        1 => a,
        _ => Expr::pow(a, n),
    }
}

/// `∂e/∂v`. Correctness is judged numerically, not by syntactic form.
pub fn differentiate(e: &Expr, v: VarRef) -> Expr {
    match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var(w) => Expr::Const(if *w == v { 1.0 } else { 0.0 }),
        Expr::Unary(op, a) => {
            let da = differentiate(a, v);
            if is_const(&da, 0.0) {
                return da;
            }
            match op {
                UnaryOp::Neg => neg(da),
                UnaryOp::Sin => mul(Expr::unary(UnaryOp::Cos, (**a).clone()), da),
                UnaryOp::Cos => mul(neg(Expr::unary(UnaryOp::Sin, (**a).clone())), da),
                UnaryOp::Sqrt => div(
                    da,
                    mul(Expr::Const(2.0), Expr::unary(UnaryOp::Sqrt, (**a).clone())),
                ),
            }
        }
        Expr::Binary(op, a, b) => {
            let (da, db) = (differentiate(a, v), differentiate(b, v));
            match op {
                BinaryOp::Add => add(da, db),
                BinaryOp::Sub => sub(da, db),
                BinaryOp::Mul => add(mul(da, (**b).clone()), mul((**a).clone(), db)),
                BinaryOp::Div => {
                    if is_const(&db, 0.0) {
                        div(da, (**b).clone())
                    } else {
                        div(
                            sub(mul(da, (**b).clone()), mul((**a).clone(), db)),
                            pow((**b).clone(), 2),
                        )
                    }
                }
            }
        }
        Expr::Pow(a, n) => {
            let da = differentiate(a, v);
            if is_const(&da, 0.0) || *n == 0 {
                return Expr::Const(0.0);
            }
            mul(mul(Expr::Const(f64::from(*n)), pow((**a).clone(), n - 1)), da)
        }
    }
}
