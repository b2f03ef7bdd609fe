//! Line-oriented constraint file parser.
//!
//! ```text
//! # comment
//! var xC yC
//! param xA=0 yA=0
//! domain xC in [-100, 100]
//! eq dAC: (xC - xA)^2 + (yC - yA)^2 = 25
//! eq e2: uses xC yC            # structural-only form
//! ```

use std::collections::HashMap;

use thiserror::Error;

use super::expr::{BinaryOp, Expr, UnaryOp, VarRef};
use super::{Equation, EquationBody, EquationSystem, Parameter, Unknown};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared identifier `{0}`")]
    Undeclared(String),
    #[error("duplicate name `{0}`")]
    Duplicate(String),
    #[error("`{0}` is reserved")]
    Reserved(String),
    #[error("exponent must be an integer literal")]
    NonIntegerExponent,
    #[error("`{0}` is a parameter, expected an unknown")]
    NotAnUnknown(String),
    #[error("cannot mix expression equations and structural-only (`uses`) equations in one file")]
    MixedModes,
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
}

const RESERVED: &[&str] = &["var", "param", "eq", "domain", "uses", "in", "sin", "cos", "sqrt"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num { value: f64, integral: bool },
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

struct LineCtx {
    line: usize,
    /// Column of the end of the line, for errors at end of input.
    end: usize,
}

impl LineCtx {
    fn err(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }
}

fn lex(text: &str, base_column: usize, ctx: &LineCtx) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = base_column + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            let mut integral = true;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                integral = false;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    integral = false;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lexeme: String = chars[start..i].iter().collect();
            let value = lexeme
                .parse::<f64>()
                .map_err(|_| ctx.err(column, ParseErrorKind::Syntax(format!("bad number `{lexeme}`"))))?;
            out.push(Token {
                tok: Tok::Num { value, integral },
                column,
            });
        } else if "+-*/^()=,[]:".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                column,
            });
            i += 1;
        } else {
            return Err(ctx.err(column, ParseErrorKind::Syntax(format!("unexpected character `{c}`"))));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    ctx: &'a LineCtx,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.ctx.end, |t| t.column)
    }

    fn next(&mut self) -> Option<&'a Tok> {
        let t = self.toks.get(self.pos).map(|t| &t.tok);
        self.pos += 1;
        t
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{c}`")))
        }
    }

    fn syntax(&self, msg: String) -> ParseError {
        let found = match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Num { value, .. }) => format!("`{value}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        };
        self.ctx
            .err(self.column(), ParseErrorKind::Syntax(format!("{msg}, found {found}")))
    }

    fn done(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = if self.at_sym('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num { value, .. }) => Ok(if negative { -value } else { *value }),
            _ => {
                self.pos -= 1;
                Err(self.syntax("expected a number".into()))
            }
        }
    }
}

struct ExprParser<'a, 'c> {
    cur: Cursor<'c>,
    names: &'a HashMap<String, VarRef>,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.cur.at_sym('+') {
                BinaryOp::Add
            } else if self.cur.at_sym('-') {
                BinaryOp::Sub
            } else {
                return Ok(lhs);
            };
            self.cur.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.cur.at_sym('*') {
                BinaryOp::Mul
            } else if self.cur.at_sym('/') {
                BinaryOp::Div
            } else {
                return Ok(lhs);
            };
            self.cur.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.cur.at_sym('-') {
            self.cur.pos += 1;
            // a signed literal is a constant, unless it is the base of a power
            if let Some(Tok::Num { value, .. }) = self.cur.peek() {
                let follows = self.cur.toks.get(self.cur.pos + 1).map(|t| &t.tok);
                if follows != Some(&Tok::Sym('^')) {
                    self.cur.pos += 1;
                    return Ok(Expr::Const(-value));
                }
            }
            return Ok(Expr::unary(UnaryOp::Neg, self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.cur.at_sym('^') {
            return Ok(base);
        }
        self.cur.pos += 1;
        Ok(Expr::pow(base, self.exponent()?))
    }

    /// `['-'] INT ['^' exponent]` or the same in parentheses; right-associative.
    fn exponent(&mut self) -> Result<i32, ParseError> {
        let column = self.cur.column();
        let non_int = || self.cur.ctx.err(column, ParseErrorKind::NonIntegerExponent);
        let parenthesized = self.cur.at_sym('(');
        if parenthesized {
            self.cur.pos += 1;
        }
        let negative = self.cur.at_sym('-');
        if negative {
            self.cur.pos += 1;
        }
        let n = match self.cur.peek() {
            Some(Tok::Num { value, .. }) if value.fract() == 0.0 && value.abs() <= i32::MAX as f64 => {
                *value as i32
            }
            _ => return Err(non_int()),
        };
        self.cur.pos += 1;
        if parenthesized {
            if !self.cur.at_sym(')') {
                return Err(non_int());
            }
            self.cur.pos += 1;
        }
        let mut n = if negative { -n } else { n };
        if self.cur.at_sym('^') {
            self.cur.pos += 1;
            let e = self.exponent()?;
            n = u32::try_from(e)
                .ok()
                .and_then(|e| n.checked_pow(e))
                .ok_or_else(non_int)?;
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let column = self.cur.column();
        match self.cur.peek() {
            Some(Tok::Num { value, .. }) => {
                self.cur.pos += 1;
                Ok(Expr::Const(*value))
            }
            Some(Tok::Sym('(')) => {
                self.cur.pos += 1;
                let e = self.expr()?;
                self.cur.expect_sym(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.cur.pos += 1;
                let func = match name.as_str() {
                    "sin" => Some(UnaryOp::Sin),
                    "cos" => Some(UnaryOp::Cos),
                    "sqrt" => Some(UnaryOp::Sqrt),
                    _ => None,
                };
                if let Some(op) = func {
                    self.cur.expect_sym('(')?;
                    let e = self.expr()?;
                    self.cur.expect_sym(')')?;
                    return Ok(Expr::unary(op, e));
                }
                self.names
                    .get(name)
                    .map(|&v| Expr::Var(v))
                    .ok_or_else(|| self.cur.ctx.err(column, ParseErrorKind::Undeclared(name.clone())))
            }
            _ => Err(self.cur.syntax("expected an expression".into())),
        }
    }
}

/// Splits off the keyword and returns `(keyword, column of rest, rest)`.
fn split_keyword(line: &str) -> (&str, usize, &str) {
    let trimmed_start = line.len() - line.trim_start().len();
    let body = &line[trimmed_start..];
    let kw_len = body.find(char::is_whitespace).unwrap_or(body.len());
    (&body[..kw_len], trimmed_start + kw_len + 1, &body[kw_len..])
}

fn strip_comment(line: &str) -> &str {
    line.find('#').map_or(line, |i| &line[..i])
}

fn check_name(name: &str, column: usize, ctx: &LineCtx) -> Result<(), ParseError> {
    if RESERVED.contains(&name) {
        return Err(ctx.err(column, ParseErrorKind::Reserved(name.into())));
    }
    Ok(())
}

/// Parses a constraint file.
pub fn parse_system(text: &str) -> Result<EquationSystem, ParseError> {
    let mut unknowns: Vec<Unknown> = Vec::new();
    let mut parameters: Vec<Parameter> = Vec::new();
    let mut names: HashMap<String, VarRef> = HashMap::new();

    let lines: Vec<(LineCtx, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let line = strip_comment(raw);
            (
                LineCtx {
                    line: i + 1,
                    end: line.chars().count() + 1,
                },
                line,
            )
        })
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    // declarations first, so equations may precede them
    for (ctx, line) in &lines {
        let (kw, col, rest) = split_keyword(line);
        match kw {
            "var" => {
                let toks = lex(rest, col, ctx)?;
                if toks.is_empty() {
                    return Err(ctx.err(ctx.end, ParseErrorKind::Syntax("`var` needs at least one name".into())));
                }
                for t in toks {
                    let Tok::Ident(name) = t.tok else {
                        return Err(ctx.err(t.column, ParseErrorKind::Syntax("expected a name".into())));
                    };
                    check_name(&name, t.column, ctx)?;
                    if names.contains_key(&name) {
                        return Err(ctx.err(t.column, ParseErrorKind::Duplicate(name)));
                    }
                    names.insert(name.clone(), VarRef::Unknown(unknowns.len()));
                    unknowns.push(Unknown { name, domain: None });
                }
            }
            "param" => {
                let toks = lex(rest, col, ctx)?;
                let mut cur = Cursor {
                    toks: &toks,
                    pos: 0,
                    ctx,
                };
                if cur.done() {
                    return Err(ctx.err(ctx.end, ParseErrorKind::Syntax("`param` needs at least one binding".into())));
                }
                while !cur.done() {
                    let column = cur.column();
                    let Some(Tok::Ident(name)) = cur.next() else {
                        cur.pos -= 1;
                        return Err(cur.syntax("expected `name=value`".into()));
                    };
                    check_name(name, column, ctx)?;
                    if names.contains_key(name) {
                        return Err(ctx.err(column, ParseErrorKind::Duplicate(name.clone())));
                    }
                    cur.expect_sym('=')?;
                    let value = cur.signed_number()?;
                    names.insert(name.clone(), VarRef::Param(parameters.len()));
                    parameters.push(Parameter {
                        name: name.clone(),
                        value,
                    });
                }
            }
            "eq" | "domain" => {}
            other => {
                let column = line.len() - line.trim_start().len() + 1;
                return Err(ctx.err(
                    column,
                    ParseErrorKind::Syntax(format!("unknown directive `{other}`")),
                ));
            }
        }
    }

    let mut equations: Vec<Equation> = Vec::new();
    let mut seen_eq: HashMap<String, ()> = HashMap::new();
    let mut mode: Option<bool> = None; // Some(true) = structural
    for (ctx, line) in &lines {
        let (kw, col, rest) = split_keyword(line);
        match kw {
            "domain" => parse_domain(rest, col, ctx, &names, &mut unknowns)?,
            "eq" => {
                let toks = lex(rest, col, ctx)?;
                let mut cur = Cursor {
                    toks: &toks,
                    pos: 0,
                    ctx,
                };
                let column = cur.column();
                let Some(Tok::Ident(name)) = cur.next() else {
                    cur.pos = cur.pos.saturating_sub(1);
                    return Err(cur.syntax("expected an equation name".into()));
                };
                check_name(name, column, ctx)?;
                if seen_eq.insert(name.clone(), ()).is_some() {
                    return Err(ctx.err(column, ParseErrorKind::Duplicate(name.clone())));
                }
                cur.expect_sym(':')?;
                let body_column = cur.column();
                let structural = cur.peek() == Some(&Tok::Ident("uses".into()));
                if *mode.get_or_insert(structural) != structural {
                    return Err(ctx.err(body_column, ParseErrorKind::MixedModes));
                }
                let body = if structural {
                    cur.pos += 1;
                    let mut used = Vec::new();
                    while !cur.done() {
                        let column = cur.column();
                        let Some(Tok::Ident(u)) = cur.next() else {
                            cur.pos -= 1;
                            return Err(cur.syntax("expected an unknown name".into()));
                        };
                        match names.get(u) {
                            Some(VarRef::Unknown(i)) => used.push(*i),
                            Some(VarRef::Param(_)) => {
                                return Err(ctx.err(column, ParseErrorKind::NotAnUnknown(u.clone())))
                            }
                            None => return Err(ctx.err(column, ParseErrorKind::Undeclared(u.clone()))),
                        }
                    }
                    EquationBody::Uses(used)
                } else {
                    let mut p = ExprParser { cur, names: &names };
                    let lhs = p.expr()?;
                    p.cur.expect_sym('=')?;
                    let rhs = p.expr()?;
                    if !p.cur.done() {
                        return Err(p.cur.syntax("expected end of equation".into()));
                    }
                    EquationBody::Expression(if rhs == Expr::Const(0.0) {
                        lhs
                    } else {
                        Expr::binary(BinaryOp::Sub, lhs, rhs)
                    })
                };
                equations.push(Equation {
                    name: name.clone(),
                    body,
                });
            }
            _ => {}
        }
    }

    Ok(EquationSystem {
        unknowns,
        parameters,
        equations,
        structural_only: mode == Some(true),
    })
}

fn parse_domain(
    rest: &str,
    col: usize,
    ctx: &LineCtx,
    names: &HashMap<String, VarRef>,
    unknowns: &mut [Unknown],
) -> Result<(), ParseError> {
    let toks = lex(rest, col, ctx)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        ctx,
    };
    let column = cur.column();
    let Some(Tok::Ident(name)) = cur.next() else {
        cur.pos = cur.pos.saturating_sub(1);
        return Err(cur.syntax("expected an unknown name".into()));
    };
    let index = match names.get(name) {
        Some(VarRef::Unknown(i)) => *i,
        Some(VarRef::Param(_)) => return Err(ctx.err(column, ParseErrorKind::NotAnUnknown(name.clone()))),
        None => return Err(ctx.err(column, ParseErrorKind::Undeclared(name.clone()))),
    };
    if cur.next() != Some(&Tok::Ident("in".into())) {
        cur.pos -= 1;
        return Err(cur.syntax("expected `in`".into()));
    }
    cur.expect_sym('[')?;
    let lo_col = cur.column();
    let lo = cur.signed_number()?;
    cur.expect_sym(',')?;
    let hi = cur.signed_number()?;
    cur.expect_sym(']')?;
    if !cur.done() {
        return Err(cur.syntax("expected end of line".into()));
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(ctx.err(lo_col, ParseErrorKind::InvalidDomain(format!("[{lo}, {hi}]"))));
    }
    if unknowns[index].domain.is_some() {
        return Err(ctx.err(column, ParseErrorKind::Duplicate(format!("domain {name}"))));
    }
    unknowns[index].domain = Some((lo, hi));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> ParseErrorKind {
        parse_system(text).unwrap_err().kind
    }

    #[test]
    fn minimal_file() {
        let s = parse_system("var x\neq e1: x - 3 = 0").unwrap();
        assert_eq!(s.unknowns.len(), 1);
        assert_eq!(s.equations.len(), 1);
        assert_eq!(
            s.equations[0].body,
            EquationBody::Expression(Expr::binary(BinaryOp::Sub, Expr::unknown(0), Expr::Const(3.0)))
        );
        assert!(!s.structural_only);
    }

    #[test]
    fn mixing_modes_is_rejected() {
        let err = parse_system("var x y\nparam a=2\neq e1: x^2 + a*y = 1\neq e2: uses x").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MixedModes);
        assert_eq!(err.line, 4);
    }

    #[test]
    fn parameters_stay_out_of_incidence() {
        let s = parse_system("var xC yC\nparam xA=0 yA=0\neq dAC: (xC-xA)^2 + (yC-yA)^2 - 25 = 0").unwrap();
        assert_eq!(s.equations.len(), 1);
        assert_eq!(s.incidence(), vec![(0, vec![0, 1])]);
    }

    #[test]
    fn precedence() {
        let s = parse_system("var x y\neq e: -x^2 + 2*y/3 - 1 = 0").unwrap();
        let x = Expr::unknown(0);
        let y = Expr::unknown(1);
        let expect = Expr::binary(
            BinaryOp::Sub,
            Expr::binary(
                BinaryOp::Add,
                Expr::unary(UnaryOp::Neg, Expr::pow(x, 2)),
                Expr::binary(
                    BinaryOp::Div,
                    Expr::binary(BinaryOp::Mul, Expr::Const(2.0), y),
                    Expr::Const(3.0),
                ),
            ),
            Expr::Const(1.0),
        );
        assert_eq!(s.equations[0].body, EquationBody::Expression(expect));
    }

    #[test]
    fn right_associative_integer_powers() {
        let s = parse_system("var x\neq e: x^2^3 + x^-1 + x^(2) = 0").unwrap();
        let EquationBody::Expression(e) = &s.equations[0].body else { panic!() };
        let text = e.to_string();
        assert_eq!(text, "((u0^8 + u0^-1) + u0^2)");
    }

    #[test]
    fn non_integer_exponents() {
        assert_eq!(kind("var x\neq e: x^2.5 = 0"), ParseErrorKind::NonIntegerExponent);
        assert_eq!(kind("var x y\neq e: x^y = 0"), ParseErrorKind::NonIntegerExponent);
    }

    #[test]
    fn error_positions() {
        let err = parse_system("var x\n\neq e: x + z = 1").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Undeclared("z".into()));
        assert_eq!((err.line, err.column), (3, 11));
        let err = parse_system("var x\neq e: x + * 1 = 0").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((err.line, err.column), (2, 11));
        assert!(err.to_string().starts_with("line 2, column 11"));
    }

    #[test]
    fn duplicates() {
        assert_eq!(kind("var x x"), ParseErrorKind::Duplicate("x".into()));
        assert_eq!(kind("var x\nparam x=1"), ParseErrorKind::Duplicate("x".into()));
        assert_eq!(kind("var x\neq e: x=1\neq e: x=2"), ParseErrorKind::Duplicate("e".into()));
    }

    #[test]
    fn reserved_and_unknown_directives() {
        assert_eq!(kind("var sin"), ParseErrorKind::Reserved("sin".into()));
        assert!(matches!(kind("let x = 1"), ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn structural_file() {
        let s = parse_system("var a b c\neq e1: uses a b\neq e2: uses c c\n").unwrap();
        assert!(s.structural_only);
        assert_eq!(s.incidence(), vec![(0, vec![0, 1]), (1, vec![2])]);
        assert_eq!(kind("var a\nparam p=1\neq e: uses p"), ParseErrorKind::NotAnUnknown("p".into()));
    }

    #[test]
    fn domains_and_comments() {
        let s = parse_system("# header\nvar x  # trailing\ndomain x in [-2, 5.5]\neq e: x = 1").unwrap();
        assert_eq!(s.unknowns[0].domain, Some((-2.0, 5.5)));
        assert!(matches!(kind("var x\ndomain x in [3, 1]"), ParseErrorKind::InvalidDomain(_)));
        assert_eq!(kind("var x\nparam p=1\ndomain p in [0, 1]"), ParseErrorKind::NotAnUnknown("p".into()));
    }

    #[test]
    fn declarations_may_follow_equations() {
        let s = parse_system("eq e: x*p = 1\nvar x\nparam p=-2.5").unwrap();
        assert_eq!(s.parameters[0].value, -2.5);
    }

    #[test]
    fn missing_equals_sign() {
        assert!(matches!(kind("var x\neq e: x + 1"), ParseErrorKind::Syntax(_)));
        assert!(matches!(kind("var x\neq e: x = 1 = 2"), ParseErrorKind::Syntax(_)));
    }

    #[test]
    fn empty_text_is_an_empty_system() {
        let s = parse_system("# nothing\n\n").unwrap();
        assert!(s.equations.is_empty() && s.unknowns.is_empty());
    }
}
