use std::fmt;

use thiserror::Error;

use crate::interval::{Interval, IntervalBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("divisor interval contains zero")]
    DivisionByZeroSpan,
}

/// Expression tree over problem variables, addressed by index.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, rhs: Expr) -> Expr {
        Expr::Div(Box::new(self), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn pow(self, k: u32) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    /// Left-deep sum of the terms. Panics on an empty list.
    pub fn sum_of(terms: impl IntoIterator<Item = Expr>) -> Expr {
        terms
            .into_iter()
            .reduce(Expr::add)
            .expect("sum of no terms")
    }

    /// Left-deep product of the factors. Panics on an empty list.
    pub fn product_of(factors: impl IntoIterator<Item = Expr>) -> Expr {
        factors
            .into_iter()
            .reduce(Expr::mul)
            .expect("product of no factors")
    }

    /// Largest variable index used, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.max_var().max(b.max_var())
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Expr::Var(i) => x[*i],
            Expr::Const(c) => *c,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k as i32),
        }
    }

    /// Value and gradient at `x` by forward differentiation.
    pub fn eval_with_gradient(&self, x: &[f64]) -> (f64, Vec<f64>) {
        match self {
            Expr::Var(i) => {
                let mut g = vec![0.0; x.len()];
                g[*i] = 1.0;
                (x[*i], g)
            }
            Expr::Const(c) => (*c, vec![0.0; x.len()]),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let (va, ga) = a.eval_with_gradient(x);
                let (vb, gb) = b.eval_with_gradient(x);
                let sign = if matches!(self, Expr::Add(..)) {
                    1.0
                } else {
                    -1.0
                };
                let g = ga.iter().zip(&gb).map(|(p, q)| p + sign * q).collect();
                (va + sign * vb, g)
            }
            Expr::Mul(a, b) => {
                let (va, ga) = a.eval_with_gradient(x);
                let (vb, gb) = b.eval_with_gradient(x);
                let g = ga.iter().zip(&gb).map(|(p, q)| p * vb + va * q).collect();
                (va * vb, g)
            }
            Expr::Div(a, b) => {
                let (va, ga) = a.eval_with_gradient(x);
                let (vb, gb) = b.eval_with_gradient(x);
                let g = ga
                    .iter()
                    .zip(&gb)
                    .map(|(p, q)| (p * vb - va * q) / (vb * vb))
                    .collect();
                (va / vb, g)
            }
            Expr::Neg(a) => {
                let (v, g) = a.eval_with_gradient(x);
                (-v, g.into_iter().map(|d| -d).collect())
            }
            Expr::Pow(a, k) => {
                let (v, g) = a.eval_with_gradient(x);
                let k = *k as i32;
                let dv = k as f64 * v.powi(k - 1);
                (v.powi(k), g.into_iter().map(|d| d * dv).collect())
            }
        }
    }

    /// Natural interval extension over `b`.
    pub fn eval_box(&self, b: &IntervalBox) -> Result<Interval, EvalError> {
        Ok(match self {
            Expr::Var(i) => b.dims()[*i],
            Expr::Const(c) => Interval::point(*c),
            Expr::Add(l, r) => l.eval_box(b)?.add(&r.eval_box(b)?),
            Expr::Sub(l, r) => l.eval_box(b)?.sub(&r.eval_box(b)?),
            Expr::Mul(l, r) => l.eval_box(b)?.mul(&r.eval_box(b)?),
            Expr::Div(l, r) => l
                .eval_box(b)?
                .div(&r.eval_box(b)?)
                .ok_or(EvalError::DivisionByZeroSpan)?,
            Expr::Neg(a) => a.eval_box(b)?.neg(),
            Expr::Pow(a, k) => a.eval_box(b)?.powi(*k),
        })
    }

    /// Renders with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if c.is_sign_negative() => 3,
            Expr::Pow(..) => 4,
            Expr::Var(_) | Expr::Const(_) => 5,
        }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a [String],
}

impl ExprDisplay<'_> {
    fn write(&self, e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |c: &Expr, parens: bool, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if parens {
                f.write_str("(")?;
                self.write(c, f)?;
                f.write_str(")")
            } else {
                self.write(c, f)
            }
        };
        match e {
            Expr::Var(i) => match self.names.get(*i) {
                Some(n) => f.write_str(n),
                None => write!(f, "x{}", i + 1),
            },
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let p = e.precedence();
                let op = match e {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                child(a, a.precedence() < p, f)?;
                f.write_str(op)?;
                child(b, b.precedence() <= p, f)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                // A bare literal after '-' would read back as a negative constant.
                child(a, a.precedence() < 3 || matches!(**a, Expr::Const(_)), f)
            }
            Expr::Pow(a, k) => {
                child(a, a.precedence() < 5, f)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.expr, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn interval_evaluation() {
        let sq = Expr::sum_of((0..3).map(|i| x(i).pow(2)));
        let cube = IntervalBox::cube(3, iv(-1.0, 1.0));
        assert_eq!(sq.eval_box(&cube).unwrap(), iv(0.0, 3.0));

        let lin = Expr::constant(2.0).mul(x(0)).sub(x(1));
        assert_eq!(
            lin.eval_box(&IntervalBox::cube(2, iv(-1.0, 1.0))).unwrap(),
            iv(-3.0, 3.0)
        );

        let prod = Expr::product_of((0..5).map(x)).sub(Expr::constant(1.0));
        assert_eq!(
            prod.eval_box(&IntervalBox::cube(5, iv(0.0, 1.0))).unwrap(),
            iv(-1.0, 0.0)
        );
    }

    #[test]
    fn division_span_is_an_error() {
        let e = x(0).div(x(1));
        let b = IntervalBox::new(vec![iv(1.0, 2.0), iv(-1.0, 1.0)]);
        assert_eq!(e.eval_box(&b), Err(EvalError::DivisionByZeroSpan));
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let e = x(0)
            .mul(x(1))
            .add(x(2).pow(3))
            .sub(x(0).div(x(2)))
            .add(x(1).neg());
        let p = [0.7, -1.3, 2.1];
        let (v, g) = e.eval_with_gradient(&p);
        assert!((v - e.eval(&p)).abs() < 1e-12);
        for (i, gi) in g.iter().enumerate() {
            let h = 1e-6;
            let mut hi = p;
            let mut lo = p;
            hi[i] += h;
            lo[i] -= h;
            let fd = (e.eval(&hi) - e.eval(&lo)) / (2.0 * h);
            assert!((fd - gi).abs() < 1e-6, "d/dx{i}: {fd} vs {gi}");
        }
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let e = x(0).add(x(1)).mul(x(2));
        assert_eq!(e.display(&names).to_string(), "(a + b)*c");
        let e = x(0).sub(x(1).sub(x(2)));
        assert_eq!(e.display(&names).to_string(), "a - (b - c)");
        let e = x(0).neg().pow(2);
        assert_eq!(e.display(&names).to_string(), "(-a)^2");
        let e = Expr::constant(3.0).neg();
        assert_eq!(e.display(&names).to_string(), "-(3)");
    }
}
