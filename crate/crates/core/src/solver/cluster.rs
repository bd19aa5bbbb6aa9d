//! Grouping of candidate boxes into solution clusters, and a point Newton
//! step used to polish cluster centers.

use nalgebra::{DMatrix, DVector};

use crate::interval::IntervalBox;
use crate::problems::Problem;

#[derive(Debug, Clone)]
pub struct Cluster {
    /// Indices into the clustered box list, ascending.
    pub members: Vec<usize>,
    pub hull: IntervalBox,
}

impl Cluster {
    pub fn center(&self) -> Vec<f64> {
        self.hull.midpoint()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn separation(a: &IntervalBox, b: &IntervalBox) -> f64 {
    a.dims()
        .iter()
        .zip(b.dims())
        .map(|(x, y)| (y.lo() - x.hi()).max(x.lo() - y.hi()).max(0.0))
        .fold(0.0, f64::max)
}

/// Connected components of the boxes, linking two boxes when their
/// per-dimension gap is at most `gap` everywhere. Clusters are ordered by
/// their smallest member index.
pub fn cluster_boxes(boxes: &[IntervalBox], gap: f64) -> Vec<Cluster> {
    let n = boxes.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| boxes[a].dims()[0].lo().total_cmp(&boxes[b].dims()[0].lo()));
    for (k, &i) in order.iter().enumerate() {
        let reach = boxes[i].dims()[0].hi() + gap;
        for &j in &order[k + 1..] {
            if boxes[j].dims()[0].lo() > reach {
                break;
            }
            if separation(&boxes[i], &boxes[j]) <= gap {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut by_root: Vec<Option<usize>> = vec![None; n];
    let mut clusters: Vec<Cluster> = Vec::new();
    for (i, b) in boxes.iter().enumerate() {
        let r = find(&mut parent, i);
        match by_root[r] {
            Some(c) => {
                let cl = &mut clusters[c];
                cl.members.push(i);
                let dims = cl
                    .hull
                    .dims()
                    .iter()
                    .zip(b.dims())
                    .map(|(x, y)| x.hull(y))
                    .collect();
                cl.hull = IntervalBox::new(dims);
            }
            None => {
                by_root[r] = Some(clusters.len());
                clusters.push(Cluster {
                    members: vec![i],
                    hull: b.clone(),
                });
            }
        }
    }
    clusters
}

/// One Newton step on the equality constraints of `p` from `x`, solved in
/// the least-squares sense. Returns `x` unchanged if the step is not finite.
pub fn newton_refine(p: &Problem, x: &[f64]) -> Vec<f64> {
    let eqs: Vec<_> = p.constraints().iter().filter(|c| c.is_equality()).collect();
    if eqs.is_empty() {
        return x.to_vec();
    }
    let n = x.len();
    let mut jac = DMatrix::zeros(eqs.len(), n);
    let mut rhs = DVector::zeros(eqs.len());
    for (r, c) in eqs.iter().enumerate() {
        let (v, g) = c.expr.eval_with_gradient(x);
        rhs[r] = c.range.lo() - v;
        for (k, gk) in g.into_iter().enumerate() {
            jac[(r, k)] = gk;
        }
    }
    let step = match jac.svd(true, true).solve(&rhs, 1e-12) {
        Ok(s) => s,
        Err(_) => return x.to_vec(),
    };
    if step.iter().all(|s| s.is_finite()) {
        x.iter().zip(step.iter()).map(|(a, d)| a + d).collect()
    } else {
        x.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::problems::{Constraint, Expr};

    fn unit_box(x: f64, y: f64, w: f64) -> IntervalBox {
        IntervalBox::new(vec![
            Interval::new(x, x + w).unwrap(),
            Interval::new(y, y + w).unwrap(),
        ])
    }

    #[test]
    fn touching_boxes_merge() {
        let boxes = vec![
            unit_box(0.0, 0.0, 1.0),
            unit_box(5.0, 5.0, 1.0),
            unit_box(1.0, 0.5, 1.0),
            unit_box(2.5, 0.0, 1.0),
        ];
        let c = cluster_boxes(&boxes, 0.0);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].members, vec![0, 2]);
        assert_eq!(c[1].members, vec![1]);
        assert_eq!(c[2].members, vec![3]);
        let c = cluster_boxes(&boxes, 0.6);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].members, vec![0, 2, 3]);
    }

    #[test]
    fn newton_step_converges_quadratically() {
        let p = Problem::new(
            vec!["x".into(), "y".into()],
            IntervalBox::cube(2, Interval::new(-5.0, 5.0).unwrap()),
            vec![
                Constraint::equals(Expr::var(0).pow(2).add(Expr::var(1).pow(2)), 2.0),
                Constraint::equals(Expr::var(0).sub(Expr::var(1)), 0.0),
            ],
            None,
            None,
        )
        .unwrap();
        let x = newton_refine(&p, &[1.001, 0.999]);
        assert!((x[0] - 1.0).abs() < 1e-5 && (x[1] - 1.0).abs() < 1e-5);
        assert!(p.max_violation(&x) < 1e-5);
    }
}
