//! Problem model: variables with an initial box, constraints `f_i(x) ∈ C_i`,
//! and an optional declared cycle symmetry. Also the text file format and
//! the built-in benchmark systems.

mod expr;
mod parse;

use std::fmt;

use thiserror::Error;

pub use expr::{EvalError, Expr, ExprDisplay};
pub use parse::{parse_problem, ParseError, ParseErrorKind};

use crate::interval::{Interval, IntervalBox};
use crate::symmetry::{ConstraintPermutation, CycleSymmetry};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("constraint {constraint} references variable {var} but only {n_vars} exist")]
    UnknownVariable {
        constraint: usize,
        var: usize,
        n_vars: usize,
    },
    #[error("{names} variable names for a {dims}-dimensional box")]
    BoxMismatch { names: usize, dims: usize },
    #[error("symmetry is over {got} variables, problem has {expected}")]
    SymmetryMismatch { got: usize, expected: usize },
    #[error("sigma permutes {got} constraints, problem has {expected}")]
    SigmaMismatch { got: usize, expected: usize },
    #[error("sigma given without a cycle")]
    SigmaWithoutCycle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub expr: Expr,
    pub range: Interval,
}

impl Constraint {
    pub fn new(expr: Expr, range: Interval) -> Self {
        Constraint { expr, range }
    }

    pub fn equals(expr: Expr, value: f64) -> Self {
        Constraint {
            expr,
            range: Interval::point(value),
        }
    }

    pub fn is_equality(&self) -> bool {
        self.range.is_point()
    }

    /// Distance from `f(x)` to the range; zero when satisfied.
    pub fn violation(&self, x: &[f64]) -> f64 {
        let v = self.expr.eval(x);
        if v < self.range.lo() {
            self.range.lo() - v
        } else if v > self.range.hi() {
            v - self.range.hi()
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    var_names: Vec<String>,
    initial_box: IntervalBox,
    constraints: Vec<Constraint>,
    symmetry: Option<CycleSymmetry>,
    sigma: Option<ConstraintPermutation>,
}

impl Problem {
    pub fn new(
        var_names: Vec<String>,
        initial_box: IntervalBox,
        constraints: Vec<Constraint>,
        symmetry: Option<CycleSymmetry>,
        sigma: Option<ConstraintPermutation>,
    ) -> Result<Self, ProblemError> {
        let n = initial_box.len();
        if var_names.len() != n {
            return Err(ProblemError::BoxMismatch {
                names: var_names.len(),
                dims: n,
            });
        }
        for (i, c) in constraints.iter().enumerate() {
            if let Some(v) = c.expr.max_var().filter(|&v| v >= n) {
                return Err(ProblemError::UnknownVariable {
                    constraint: i,
                    var: v,
                    n_vars: n,
                });
            }
        }
        if let Some(s) = &symmetry {
            if s.n_vars() != n {
                return Err(ProblemError::SymmetryMismatch {
                    got: s.n_vars(),
                    expected: n,
                });
            }
        }
        if let Some(sg) = &sigma {
            if symmetry.is_none() {
                return Err(ProblemError::SigmaWithoutCycle);
            }
            if sg.len() != constraints.len() {
                return Err(ProblemError::SigmaMismatch {
                    got: sg.len(),
                    expected: constraints.len(),
                });
            }
        }
        Ok(Problem {
            var_names,
            initial_box,
            constraints,
            symmetry,
            sigma,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.initial_box.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn initial_box(&self) -> &IntervalBox {
        &self.initial_box
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn symmetry(&self) -> Option<&CycleSymmetry> {
        self.symmetry.as_ref()
    }

    pub fn sigma(&self) -> Option<&ConstraintPermutation> {
        self.sigma.as_ref()
    }

    pub fn with_initial_box(mut self, b: IntervalBox) -> Result<Self, ProblemError> {
        if b.len() != self.n_vars() {
            return Err(ProblemError::BoxMismatch {
                names: self.n_vars(),
                dims: b.len(),
            });
        }
        self.initial_box = b;
        Ok(self)
    }

    pub fn without_symmetry(mut self) -> Self {
        self.symmetry = None;
        self.sigma = None;
        self
    }

    /// Largest constraint violation at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|c| c.violation(x))
            .fold(0.0, f64::max)
    }
}

fn fmt_bound(x: f64) -> String {
    // Display of f64 is the shortest string that reads back exactly.
    format!("{x}")
}

/// Renders the problem in the text file format; parsing the output yields an
/// equal problem.
impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in self.var_names.iter().zip(self.initial_box.dims()) {
            writeln!(
                f,
                "var {name} in [{}, {}]",
                fmt_bound(d.lo()),
                fmt_bound(d.hi())
            )?;
        }
        if let Some(s) = &self.symmetry {
            let names: Vec<&str> = s
                .cycle()
                .iter()
                .map(|&i| self.var_names[i].as_str())
                .collect();
            writeln!(f, "cycle ({})", names.join(" "))?;
        }
        if let Some(sg) = &self.sigma {
            let pairs: Vec<String> = sg
                .as_slice()
                .iter()
                .enumerate()
                .map(|(i, j)| format!("{} -> {}", i + 1, j + 1))
                .collect();
            writeln!(f, "sigma ({})", pairs.join(", "))?;
        }
        for c in &self.constraints {
            writeln!(
                f,
                "constraint {} in [{}, {}]",
                c.expr.display(&self.var_names),
                fmt_bound(c.range.lo()),
                fmt_bound(c.range.hi())
            )?;
        }
        Ok(())
    }
}

/// Default half-width of the cyclic n-roots domain: `[-10, 10]^n`, reduced
/// to `[-5, 5]^8` for `n = 8`.
pub fn cyclic_default_half_width(n: usize) -> f64 {
    if n == 8 {
        5.0
    } else {
        10.0
    }
}

pub fn cyclic_n_roots(n: usize) -> Problem {
    cyclic_n_roots_on(n, cyclic_default_half_width(n))
}

/// The cyclic n-roots system on `[-half_width, half_width]^n`: for
/// `d = 1 … n-1` the cyclic sum of all products of `d` consecutive
/// variables is zero, and the product of all variables is one.
pub fn cyclic_n_roots_on(n: usize, half_width: f64) -> Problem {
    assert!(n >= 2, "cyclic n-roots needs n >= 2");
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let side = Interval::new(-half_width, half_width).expect("finite positive half width");
    let mut constraints: Vec<Constraint> = (1..n)
        .map(|d| {
            let sum = Expr::sum_of(
                (0..n).map(|i| Expr::product_of((0..d).map(|j| Expr::var((i + j) % n)))),
            );
            Constraint::equals(sum, 0.0)
        })
        .collect();
    constraints.push(Constraint::equals(
        Expr::product_of((0..n).map(Expr::var)).sub(Expr::constant(1.0)),
        0.0,
    ));
    Problem::new(
        names,
        IntervalBox::cube(n, side),
        constraints,
        Some(CycleSymmetry::full(n)),
        Some(ConstraintPermutation::identity(n)),
    )
    .expect("generated problem is consistent")
}

/// Three variables on `[-1, 1]^3`: `x1² + x2² + x3² = 5` and
/// `2x_i − x_{i+1} ≥ 0` cyclically. Infeasible on its domain.
pub fn example_sphere() -> Problem {
    let x = Expr::var;
    let names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
    let nonneg = Interval::new(0.0, f64::INFINITY).unwrap();
    let lin = |a: usize, b: usize| Expr::constant(2.0).mul(x(a)).sub(x(b));
    let constraints = vec![
        Constraint::equals(x(0).pow(2).add(x(1).pow(2)).add(x(2).pow(2)), 5.0),
        Constraint::new(lin(0, 1), nonneg),
        Constraint::new(lin(1, 2), nonneg),
        Constraint::new(lin(2, 0), nonneg),
    ];
    Problem::new(
        names,
        IntervalBox::cube(3, Interval::new(-1.0, 1.0).unwrap()),
        constraints,
        Some(CycleSymmetry::full(3)),
        Some(ConstraintPermutation::new(vec![0, 2, 3, 1]).unwrap()),
    )
    .expect("generated problem is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::verify_symmetry;
    use proptest::prelude::*;

    #[test]
    fn cyclic_five_matches_written_equations() {
        let p = cyclic_n_roots(5);
        assert_eq!(p.constraints().len(), 5);
        let names = p.var_names();
        let text: Vec<String> = p
            .constraints()
            .iter()
            .map(|c| c.expr.display(names).to_string())
            .collect();
        assert_eq!(text[0], "x1 + x2 + x3 + x4 + x5");
        assert_eq!(text[1], "x1*x2 + x2*x3 + x3*x4 + x4*x5 + x5*x1");
        assert_eq!(
            text[2],
            "x1*x2*x3 + x2*x3*x4 + x3*x4*x5 + x4*x5*x1 + x5*x1*x2"
        );
        assert_eq!(
            text[3],
            "x1*x2*x3*x4 + x2*x3*x4*x5 + x3*x4*x5*x1 + x4*x5*x1*x2 + x5*x1*x2*x3"
        );
        assert_eq!(text[4], "x1*x2*x3*x4*x5 - 1");
        for c in p.constraints() {
            assert_eq!(c.range, Interval::point(0.0));
        }
        assert_eq!(
            p.initial_box().dims()[0],
            Interval::new(-10.0, 10.0).unwrap()
        );
        assert_eq!(cyclic_n_roots(3).constraints().len(), 3);
        assert_eq!(
            cyclic_n_roots(8).initial_box().dims()[0],
            Interval::new(-5.0, 5.0).unwrap()
        );
    }

    #[test]
    fn sphere_example() {
        let p = example_sphere();
        assert_eq!(p.n_vars(), 3);
        assert_eq!(p.constraints()[0].range, Interval::point(5.0));
        assert_eq!(
            p.constraints()[1].range,
            Interval::new(0.0, f64::INFINITY).unwrap()
        );
        assert_eq!(p.symmetry().unwrap().cycle(), &[0, 1, 2]);
    }

    #[test]
    fn generated_problems_pass_their_symmetry_check() {
        let mut ps = vec![example_sphere()];
        ps.extend((2..=8).map(cyclic_n_roots));
        for p in ps {
            let v =
                verify_symmetry(&p, p.symmetry().unwrap(), p.sigma().unwrap(), 100, 11).unwrap();
            assert!(v.holds(), "{v:?}");
        }
    }

    #[test]
    fn problem_rejects_bad_references() {
        let b = IntervalBox::cube(2, Interval::new(0.0, 1.0).unwrap());
        let names = vec!["a".to_string(), "b".to_string()];
        let c = Constraint::equals(Expr::var(2), 0.0);
        assert!(matches!(
            Problem::new(names.clone(), b.clone(), vec![c], None, None),
            Err(ProblemError::UnknownVariable { .. })
        ));
        assert!(matches!(
            Problem::new(
                names,
                b,
                vec![],
                None,
                Some(ConstraintPermutation::identity(0))
            ),
            Err(ProblemError::SigmaWithoutCycle)
        ));
    }

    proptest! {
        #[test]
        fn cyclic_constraints_invariant_under_shift(x in proptest::collection::vec(-3f64..3.0, 6), t in 1usize..6) {
            let p = cyclic_n_roots(6);
            let s = p.symmetry().unwrap();
            let sx = s.apply_point(&x, t);
            for c in p.constraints() {
                let a = c.expr.eval(&x);
                let b = c.expr.eval(&sx);
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
            }
        }
    }
}
