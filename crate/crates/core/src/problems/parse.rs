//! Line-oriented problem files.
//!
//! ```text
//! # comment
//! var x1 in [-1, 1]
//! cycle (x1 x2 x3)
//! sigma (1 -> 1, 2 -> 3, 3 -> 4, 4 -> 2)
//! constraint x1^2 + x2^2 + x3^2 in [5, 5]
//! constraint 2*x1 - x2 in [0, inf]
//! ```
//!
//! Variables must be declared before they are used. `sigma` indices are
//! 1-based constraint positions and are resolved after the whole file is
//! read.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use super::{Constraint, Expr, Problem, ProblemError};
use crate::interval::{Interval, IntervalBox};
use crate::symmetry::{ConstraintPermutation, CycleSymmetry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("bad interval [{lo}, {hi}]")]
    BadInterval { lo: f64, hi: f64 },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("invalid sigma: {0}")]
    InvalidSigma(String),
    #[error("{0}")]
    Problem(#[from] ProblemError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64, String),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(_, raw) => write!(f, "`{raw}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 12] = ["->", "+", "-", "*", "/", "^", "(", ")", "[", "]", ",", ":"];

fn tokenize(line: &str, line_no: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c == '#' {
            break;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let raw: String = chars[start..i].iter().collect();
            let v: f64 = raw.parse().map_err(|_| ParseError {
                line: line_no,
                col,
                kind: ParseErrorKind::Syntax(format!("bad number `{raw}`")),
            })?;
            out.push((Tok::Num(v, raw), col));
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            let sym = SYMBOLS
                .iter()
                .find(|s| rest.starts_with(*s))
                .ok_or(ParseError {
                    line: line_no,
                    col,
                    kind: ParseErrorKind::Syntax(format!("unexpected character `{c}`")),
                })?;
            i += sym.chars().count();
            out.push((Tok::Sym(sym), col));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col(),
            kind,
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        let found = match self.peek() {
            Some(t) => format!(", found {t}"),
            None => ", found end of line".to_string(),
        };
        self.err(ParseErrorKind::Syntax(format!("{}{found}", msg.into())))
    }

    fn bump(&mut self) -> Option<&'a Tok> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(x)) if *x == s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{s}`")))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.syntax(format!("expected `{kw}`"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok((s.clone(), col))
            }
            _ => Err(self.syntax("expected a name")),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.syntax("expected end of line"))
        } else {
            Ok(())
        }
    }

    fn expect_nat(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Num(v, raw)) if raw.chars().all(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                Ok(*v as u64)
            }
            _ => Err(self.syntax("expected a natural number")),
        }
    }

    /// `[-]number`, `[-]inf` or `+inf`.
    fn bound(&mut self) -> Result<f64, ParseError> {
        let sign = if self.eat_sym("-") {
            -1.0
        } else {
            self.eat_sym("+");
            1.0
        };
        match self.bump() {
            Some(Tok::Num(v, _)) => Ok(sign * v),
            Some(Tok::Ident(s)) if s == "inf" => Ok(sign * f64::INFINITY),
            _ => {
                self.pos -= 1;
                Err(self.syntax("expected a number or `inf`"))
            }
        }
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let col = self.col();
        self.expect_sym("[")?;
        let lo = self.bound()?;
        self.expect_sym(",")?;
        let hi = self.bound()?;
        self.expect_sym("]")?;
        Interval::new(lo, hi).map_err(|_| ParseError {
            line: self.line,
            col,
            kind: ParseErrorKind::BadInterval { lo, hi },
        })
    }
}

struct ExprParser<'a, 'c> {
    cur: &'c mut Cursor<'a>,
    vars: &'c HashMap<String, usize>,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.cur.eat_sym("+") {
                lhs = lhs.add(self.term()?);
            } else if self.cur.eat_sym("-") {
                lhs = lhs.sub(self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.cur.eat_sym("*") {
                lhs = lhs.mul(self.unary()?);
            } else if self.cur.eat_sym("/") {
                lhs = lhs.div(self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.cur.eat_sym("-") {
            // `-3` is a negative literal unless an exponent follows.
            if let Some(Tok::Num(v, _)) = self.cur.peek() {
                if !matches!(self.cur.peek_at(1), Some(Tok::Sym("^"))) {
                    self.cur.pos += 1;
                    return Ok(Expr::Const(-v));
                }
            }
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.cur.eat_sym("^") {
            let k = self.cur.expect_nat()?;
            if k == 0 || k > u32::MAX as u64 {
                self.cur.pos -= 1;
                return Err(self.cur.syntax("exponent must be a positive integer"));
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.cur.peek() {
            Some(Tok::Num(v, _)) => {
                self.cur.pos += 1;
                Ok(Expr::Const(*v))
            }
            Some(Tok::Ident(name)) if name != "in" => {
                let idx = *self
                    .vars
                    .get(name)
                    .ok_or_else(|| self.cur.err(ParseErrorKind::UnknownVariable(name.clone())))?;
                self.cur.pos += 1;
                Ok(Expr::Var(idx))
            }
            Some(Tok::Sym("(")) => {
                self.cur.pos += 1;
                let e = self.expr()?;
                self.cur.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.cur.syntax("expected an operand")),
        }
    }
}

/// Parsed payload with the line and column of its keyword.
type Located<T> = Option<(T, usize, usize)>;

const RESERVED: [&str; 6] = ["in", "inf", "var", "cycle", "sigma", "constraint"];

/// Parses a problem file. Errors carry 1-based line and column.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut names: Vec<String> = Vec::new();
    let mut vars: HashMap<String, usize> = HashMap::new();
    let mut dims: Vec<Interval> = Vec::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut cycle: Located<Vec<usize>> = None;
    let mut sigma: Located<Vec<(u64, u64)>> = None;

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let toks = tokenize(line, line_no)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: line_no,
            end_col: line.chars().count() + 1,
        };
        let (keyword, kw_col) = cur.expect_ident()?;
        match keyword.as_str() {
            "var" => {
                let (name, col) = cur.expect_ident()?;
                if RESERVED.contains(&name.as_str()) {
                    return Err(ParseError {
                        line: line_no,
                        col,
                        kind: ParseErrorKind::Syntax(format!("`{name}` is reserved")),
                    });
                }
                if vars.contains_key(&name) {
                    return Err(ParseError {
                        line: line_no,
                        col,
                        kind: ParseErrorKind::DuplicateVariable(name),
                    });
                }
                cur.expect_keyword("in")?;
                let d = cur.interval()?;
                cur.expect_end()?;
                vars.insert(name.clone(), names.len());
                names.push(name);
                dims.push(d);
            }
            "cycle" => {
                if cycle.is_some() {
                    return Err(ParseError {
                        line: line_no,
                        col: kw_col,
                        kind: ParseErrorKind::InvalidCycle("only one cycle is supported".into()),
                    });
                }
                cur.expect_sym("(")?;
                let mut idxs = Vec::new();
                while !cur.eat_sym(")") {
                    let (name, col) = cur.expect_ident()?;
                    let i = *vars.get(&name).ok_or(ParseError {
                        line: line_no,
                        col,
                        kind: ParseErrorKind::UnknownVariable(name.clone()),
                    })?;
                    if idxs.contains(&i) {
                        return Err(ParseError {
                            line: line_no,
                            col,
                            kind: ParseErrorKind::InvalidCycle(format!("`{name}` repeated")),
                        });
                    }
                    idxs.push(i);
                }
                cur.expect_end()?;
                if idxs.len() < 2 {
                    return Err(ParseError {
                        line: line_no,
                        col: kw_col,
                        kind: ParseErrorKind::InvalidCycle("needs at least two variables".into()),
                    });
                }
                cycle = Some((idxs, line_no, kw_col));
            }
            "sigma" => {
                cur.expect_sym("(")?;
                let mut pairs = Vec::new();
                if !cur.eat_sym(")") {
                    loop {
                        let from = cur.expect_nat()?;
                        cur.expect_sym("->")?;
                        let to = cur.expect_nat()?;
                        pairs.push((from, to));
                        if cur.eat_sym(")") {
                            break;
                        }
                        cur.expect_sym(",")?;
                    }
                }
                cur.expect_end()?;
                sigma = Some((pairs, line_no, kw_col));
            }
            "constraint" => {
                let expr = ExprParser {
                    cur: &mut cur,
                    vars: &vars,
                }
                .expr()?;
                cur.expect_keyword("in")?;
                let range = cur.interval()?;
                cur.expect_end()?;
                constraints.push(Constraint::new(expr, range));
            }
            other => {
                return Err(ParseError {
                    line: line_no,
                    col: kw_col,
                    kind: ParseErrorKind::Syntax(format!("unknown directive `{other}`")),
                })
            }
        }
    }

    let n = names.len();
    let symmetry = cycle
        .map(|(idxs, line, col)| {
            CycleSymmetry::new(n, idxs).map_err(|e| ParseError {
                line,
                col,
                kind: ParseErrorKind::InvalidCycle(e.to_string()),
            })
        })
        .transpose()?;
    let sigma = sigma
        .map(|(pairs, line, col)| {
            let err = |msg: String| ParseError {
                line,
                col,
                kind: ParseErrorKind::InvalidSigma(msg),
            };
            let m = constraints.len();
            let mut map = vec![usize::MAX; m];
            for (from, to) in pairs {
                if from == 0 || to == 0 || from as usize > m || to as usize > m {
                    return Err(err(format!("{from} -> {to} outside 1..={m}")));
                }
                if map[from as usize - 1] != usize::MAX {
                    return Err(err(format!("{from} mapped twice")));
                }
                map[from as usize - 1] = to as usize - 1;
            }
            if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
                return Err(err(format!("constraint {} has no image", i + 1)));
            }
            ConstraintPermutation::new(map).map_err(|e| err(e.to_string()))
        })
        .transpose()?;
    if sigma.is_some() && symmetry.is_none() {
        return Err(ParseError {
            line: 1,
            col: 1,
            kind: ProblemError::SigmaWithoutCycle.into(),
        });
    }
    Problem::new(names, IntervalBox::new(dims), constraints, symmetry, sigma).map_err(|e| {
        ParseError {
            line: 1,
            col: 1,
            kind: e.into(),
        }
    })
}
