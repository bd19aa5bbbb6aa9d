//! Forward-backward (HC4-revise) contraction over flattened expression trees.

use crate::interval::{Interval, IntervalBox};
use crate::problems::{Constraint, Expr};

#[derive(Debug, Clone, Copy)]
enum Node {
    Var(usize),
    Const(Interval),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Neg(usize),
    Pow(usize, u32),
}

/// Post-order flattening of one expression tree; the root is last.
#[derive(Debug, Clone)]
struct Tape {
    nodes: Vec<Node>,
}

impl Tape {
    fn compile(e: &Expr) -> Tape {
        let mut nodes = Vec::new();
        Self::push(e, &mut nodes);
        Tape { nodes }
    }

    fn push(e: &Expr, nodes: &mut Vec<Node>) -> usize {
        let node = match e {
            Expr::Var(i) => Node::Var(*i),
            Expr::Const(c) => Node::Const(Interval::point(*c)),
            Expr::Add(a, b) => Node::Add(Self::push(a, nodes), Self::push(b, nodes)),
            Expr::Sub(a, b) => Node::Sub(Self::push(a, nodes), Self::push(b, nodes)),
            Expr::Mul(a, b) => Node::Mul(Self::push(a, nodes), Self::push(b, nodes)),
            Expr::Div(a, b) => Node::Div(Self::push(a, nodes), Self::push(b, nodes)),
            Expr::Neg(a) => Node::Neg(Self::push(a, nodes)),
            Expr::Pow(a, k) => Node::Pow(Self::push(a, nodes), *k),
        };
        nodes.push(node);
        nodes.len() - 1
    }

    fn forward(&self, b: &IntervalBox, vals: &mut Vec<Interval>) {
        vals.clear();
        for node in &self.nodes {
            let v = match *node {
                Node::Var(i) => b.dims()[i],
                Node::Const(c) => c,
                Node::Add(x, y) => vals[x].add(&vals[y]),
                Node::Sub(x, y) => vals[x].sub(&vals[y]),
                Node::Mul(x, y) => vals[x].mul(&vals[y]),
                Node::Div(x, y) => vals[x].div(&vals[y]).unwrap_or(Interval::ENTIRE),
                Node::Neg(x) => vals[x].neg(),
                Node::Pow(x, k) => vals[x].powi(k),
            };
            vals.push(v);
        }
    }

    /// Narrows `b` to points where the expression can take a value in
    /// `range`. Returns `false` when no such point exists.
    fn revise(&self, range: &Interval, b: &mut IntervalBox, vals: &mut Vec<Interval>) -> bool {
        self.forward(b, vals);
        let root = self.nodes.len() - 1;
        match vals[root].intersect(range) {
            Some(v) => vals[root] = v,
            None => return false,
        }
        for i in (0..self.nodes.len()).rev() {
            let target = vals[i];
            let ok = match self.nodes[i] {
                Node::Var(v) => match b.dims()[v].intersect(&target) {
                    Some(d) => {
                        b.dims_mut()[v] = d;
                        true
                    }
                    None => false,
                },
                Node::Const(c) => c.intersect(&target).is_some(),
                Node::Add(x, y) => {
                    let nx = target.sub(&vals[y]);
                    narrow(vals, x, nx) && {
                        let ny = target.sub(&vals[x]);
                        narrow(vals, y, ny)
                    }
                }
                Node::Sub(x, y) => {
                    let nx = target.add(&vals[y]);
                    narrow(vals, x, nx) && {
                        let ny = vals[x].sub(&target);
                        narrow(vals, y, ny)
                    }
                }
                Node::Mul(x, y) => {
                    // Projections needing extended division are skipped.
                    let ok_x = match target.div(&vals[y]) {
                        Some(q) => narrow(vals, x, q),
                        None => true,
                    };
                    ok_x && match target.div(&vals[x]) {
                        Some(q) => narrow(vals, y, q),
                        None => true,
                    }
                }
                Node::Div(x, y) => {
                    let nx = target.mul(&vals[y]);
                    let ok_x = narrow(vals, x, nx);
                    ok_x && match vals[x].div(&target) {
                        Some(q) => narrow(vals, y, q),
                        None => true,
                    }
                }
                Node::Neg(x) => narrow(vals, x, target.neg()),
                Node::Pow(x, k) => match target.inverse_powi(k, &vals[x]) {
                    Some(r) => {
                        vals[x] = r;
                        true
                    }
                    None => false,
                },
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

fn narrow(vals: &mut [Interval], i: usize, with: Interval) -> bool {
    match vals[i].intersect(&with) {
        Some(v) => {
            vals[i] = v;
            true
        }
        None => false,
    }
}

/// Compiled constraint set with a reusable evaluation buffer.
#[derive(Debug, Clone)]
pub struct Contractor {
    tapes: Vec<Tape>,
    ranges: Vec<Interval>,
    rounds: usize,
    min_shrink: f64,
}

impl Contractor {
    /// `rounds` bounds the passes over all constraints; passes also stop
    /// once no dimension shrinks by more than `min_shrink` of its width.
    pub fn new(cs: &[Constraint], slack: f64, rounds: usize, min_shrink: f64) -> Self {
        let ranges = cs
            .iter()
            .map(|c| {
                if slack > 0.0 && c.is_equality() {
                    let v = c.range.lo();
                    Interval::new(v - slack, v + slack).expect("finite equality value")
                } else {
                    c.range
                }
            })
            .collect();
        Contractor {
            tapes: cs.iter().map(|c| Tape::compile(&c.expr)).collect(),
            ranges,
            rounds,
            min_shrink,
        }
    }

    /// Index of the first constraint whose range misses its interval image
    /// over `b`, without narrowing.
    pub fn refuting_constraint(&self, b: &IntervalBox) -> Option<usize> {
        let mut vals = Vec::new();
        self.tapes.iter().zip(&self.ranges).position(|(t, r)| {
            t.forward(b, &mut vals);
            vals.last().unwrap().intersect(r).is_none()
        })
    }

    /// Contracts `b` in place. Returns `false` if `b` holds no solution.
    pub fn contract(&self, b: &mut IntervalBox) -> bool {
        let mut vals = Vec::new();
        let mut before: Vec<f64> = Vec::with_capacity(b.len());
        for _ in 0..self.rounds.max(1) {
            before.clear();
            before.extend(b.dims().iter().map(Interval::width));
            for (t, r) in self.tapes.iter().zip(&self.ranges) {
                if !t.revise(r, b, &mut vals) {
                    return false;
                }
            }
            let progressed = b.dims().iter().zip(&before).any(|(d, &w0)| {
                let w = d.width();
                if w0.is_infinite() {
                    w.is_finite()
                } else {
                    w0 - w > self.min_shrink * w0
                }
            });
            if !progressed {
                break;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn tape_forward_matches_tree_evaluation() {
        let e = Expr::var(0)
            .mul(Expr::var(1))
            .sub(Expr::var(0).pow(2))
            .add(Expr::constant(3.0).div(Expr::var(1)).neg());
        let b = IntervalBox::new(vec![iv(-1.0, 2.0), iv(1.0, 3.0)]);
        let mut vals = Vec::new();
        Tape::compile(&e).forward(&b, &mut vals);
        assert_eq!(*vals.last().unwrap(), e.eval_box(&b).unwrap());
    }

    #[test]
    fn revise_projects_through_sum() {
        let c = Constraint::new(Expr::var(0).add(Expr::var(1)), iv(0.0, 0.0));
        let t = Tape::compile(&c.expr);
        let mut b = IntervalBox::new(vec![iv(-1.0, 1.0), iv(0.5, 2.0)]);
        let mut vals = Vec::new();
        assert!(t.revise(&c.range, &mut b, &mut vals));
        assert_eq!(b.dims()[0], iv(-1.0, -0.5));
        assert_eq!(b.dims()[1], iv(0.5, 1.0));
    }
}
