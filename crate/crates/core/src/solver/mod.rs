//! Branch-and-prune over boxes.
//!
//! The solver keeps a depth-first worklist. Each popped box is contracted
//! with forward-backward hull-consistency passes; an empty result rejects
//! it, a box no wider than `epsilon` in every dimension is accepted as a
//! candidate solution box, anything else is bisected at the midpoint of its
//! widest dimension (lowest index on ties) and both halves are pushed, lower
//! half on top. Accepted boxes carry no existence proof: they are boxes the
//! contractor could not refute at the chosen resolution.

mod cluster;
mod hc4;

use std::ops::AddAssign;
use std::time::{Duration, Instant};

use thiserror::Error;

pub use cluster::{cluster_boxes, newton_refine, Cluster};
pub use hc4::Contractor;

use crate::interval::{Interval, IntervalBox};
use crate::problems::{Constraint, EvalError, Expr, Problem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("max_boxes must be positive")]
    MaxBoxes,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Largest width of an accepted box.
    pub epsilon: f64,
    /// Processing stops once more boxes than this have been popped.
    pub max_boxes: u64,
    /// Maximum contraction passes per box.
    pub contraction_rounds: usize,
    /// A pass that shrinks no dimension by more than this fraction of its
    /// width ends contraction of the box.
    pub min_shrink: f64,
    /// Half-width added around equality values. Zero keeps them exact.
    pub equality_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            epsilon: 1e-4,
            max_boxes: 50_000_000,
            contraction_rounds: 10,
            min_shrink: 0.01,
            equality_slack: 0.0,
        }
    }
}

impl SolverConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        SolverConfig {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(ConfigError::Epsilon(self.epsilon));
        }
        if self.max_boxes == 0 {
            return Err(ConfigError::MaxBoxes);
        }
        Ok(())
    }

    pub fn contractor(&self, cs: &[Constraint]) -> Contractor {
        Contractor::new(
            cs,
            self.equality_slack,
            self.contraction_rounds,
            self.min_shrink,
        )
    }
}

/// Counters of one solve. Every box popped from the worklist counts as
/// processed, whether it ends rejected, accepted or bisected.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveStats {
    pub boxes_processed: u64,
    pub boxes_rejected: u64,
    pub solution_boxes: u64,
    pub bisections: u64,
    pub wall_time: Duration,
}

impl AddAssign for SolveStats {
    fn add_assign(&mut self, o: SolveStats) {
        self.boxes_processed += o.boxes_processed;
        self.boxes_rejected += o.boxes_rejected;
        self.solution_boxes += o.solution_boxes;
        self.bisections += o.bisections;
        self.wall_time += o.wall_time;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Provenance {
    /// Position of the representative subbox in class order; 0 for a plain
    /// solve.
    pub representative: usize,
    /// Power of the box symmetry that carried the box out of its
    /// representative.
    pub shift: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionBox {
    pub bounds: IntervalBox,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionSet {
    pub boxes: Vec<SolutionBox>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.boxes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn bounds(&self) -> impl Iterator<Item = &IntervalBox> {
        self.boxes.iter().map(|b| &b.bounds)
    }

    pub fn centers(&self) -> Vec<Vec<f64>> {
        self.bounds().map(IntervalBox::midpoint).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solutions: Vec<IntervalBox>,
    pub stats: SolveStats,
    /// The worklist was abandoned at `max_boxes`; `solutions` is partial.
    pub budget_exceeded: bool,
}

impl SolveOutcome {
    pub fn into_solution_set(self, provenance: Provenance) -> SolutionSet {
        SolutionSet {
            boxes: self
                .solutions
                .into_iter()
                .map(|bounds| SolutionBox { bounds, provenance })
                .collect(),
        }
    }
}

/// Natural interval extension of `e` over `b`.
pub fn eval_expr(e: &Expr, b: &IntervalBox) -> Result<Interval, EvalError> {
    e.eval_box(b)
}

/// Contracts `b` against `cs` for at most `rounds` passes. `None` when some
/// constraint is unsatisfiable on `b`.
pub fn contract(b: &IntervalBox, cs: &[Constraint], rounds: usize) -> Option<IntervalBox> {
    let defaults = SolverConfig::default();
    let c = Contractor::new(cs, 0.0, rounds, defaults.min_shrink);
    let mut out = b.clone();
    c.contract(&mut out).then_some(out)
}

/// Solves `p` inside `b0`.
pub fn branch_and_prune(p: &Problem, b0: &IntervalBox, cfg: &SolverConfig) -> SolveOutcome {
    let contractor = cfg.contractor(p.constraints());
    solve_with(&contractor, b0, cfg)
}

/// Solves with a prepared contractor; reusable across boxes of one problem.
pub fn solve_with(contractor: &Contractor, b0: &IntervalBox, cfg: &SolverConfig) -> SolveOutcome {
    let start = Instant::now();
    let mut stats = SolveStats::default();
    let mut solutions = Vec::new();
    let mut stack = vec![b0.clone()];
    let mut budget_exceeded = false;
    while let Some(mut b) = stack.pop() {
        if stats.boxes_processed >= cfg.max_boxes {
            budget_exceeded = true;
            break;
        }
        stats.boxes_processed += 1;
        if !contractor.contract(&mut b) {
            stats.boxes_rejected += 1;
            continue;
        }
        if b.max_width() <= cfg.epsilon {
            stats.solution_boxes += 1;
            solutions.push(b);
            continue;
        }
        let dim = b.widest_dim().expect("box has dimensions");
        match b.bisect(dim) {
            Ok((lower, upper)) => {
                stats.bisections += 1;
                stack.push(upper);
                stack.push(lower);
            }
            // Wider than epsilon yet not splittable in floating point.
            Err(_) => {
                stats.solution_boxes += 1;
                solutions.push(b);
            }
        }
    }
    stats.wall_time = start.elapsed();
    SolveOutcome {
        solutions,
        stats,
        budget_exceeded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{cyclic_n_roots, example_sphere};
    use crate::symmetry::CycleSymmetry;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn one_var(c: Constraint, dom: Interval) -> Problem {
        Problem::new(
            vec!["x".into()],
            IntervalBox::new(vec![dom]),
            vec![c],
            None,
            None,
        )
        .unwrap()
    }

    #[test]
    fn contract_examples() {
        let sq = Constraint::equals(Expr::var(0).pow(2), 4.0);
        let b = IntervalBox::new(vec![iv(-10.0, 10.0)]);
        let c = contract(&b, &[sq], 10).unwrap();
        let d = c.dims()[0];
        assert!(d.contains(-2.0) && d.contains(2.0));
        assert!(d.lo() > -2.0 - 1e-12 && d.hi() < 2.0 + 1e-12);

        let sphere = example_sphere();
        let cube = sphere.initial_box().clone();
        assert!(contract(&cube, &sphere.constraints()[..1], 10).is_none());

        let sum = Constraint::equals(Expr::var(0).add(Expr::var(1)), 0.0);
        let b = IntervalBox::new(vec![iv(0.0, 1.0), iv(0.5, 2.0)]);
        assert!(contract(&b, &[sum], 10).is_none());
    }

    #[test]
    fn sphere_example_has_no_solutions() {
        let p = example_sphere();
        let out = branch_and_prune(&p, p.initial_box(), &SolverConfig::default());
        assert!(out.solutions.is_empty());
        assert!(!out.budget_exceeded);
        assert_eq!(out.stats.boxes_processed, 1);
        assert_eq!(out.stats.boxes_rejected, 1);
    }

    #[test]
    fn square_roots_are_enclosed() {
        let p = one_var(
            Constraint::equals(Expr::var(0).pow(2), 4.0),
            iv(-10.0, 10.0),
        );
        let cfg = SolverConfig::with_epsilon(1e-6);
        let out = branch_and_prune(&p, p.initial_box(), &cfg);
        assert!(!out.solutions.is_empty());
        for root in [-2.0, 2.0] {
            assert!(out.solutions.iter().any(|b| b.dims()[0].contains(root)));
        }
        for b in &out.solutions {
            let d = b.dims()[0];
            assert!(d.width() <= 1e-6);
            let near = (d.mid() - 2.0).abs().min((d.mid() + 2.0).abs());
            assert!(near <= 1e-6, "{d}");
        }
        let s = out.stats;
        assert!(s.boxes_processed >= s.boxes_rejected + s.solution_boxes);
    }

    #[test]
    fn cyclic_three_has_no_real_solutions() {
        let p = cyclic_n_roots(3);
        let out = branch_and_prune(&p, p.initial_box(), &SolverConfig::with_epsilon(1e-4));
        assert!(out.solutions.is_empty());
        assert!(!out.budget_exceeded);
    }

    #[test]
    fn budget_flag() {
        let p = cyclic_n_roots(4);
        let cfg = SolverConfig {
            max_boxes: 50,
            ..SolverConfig::with_epsilon(1e-3)
        };
        let out = branch_and_prune(&p, p.initial_box(), &cfg);
        assert!(out.budget_exceeded);
        assert_eq!(out.stats.boxes_processed, 50);
    }

    #[test]
    fn deterministic_output() {
        let p = cyclic_n_roots(4);
        let cfg = SolverConfig::with_epsilon(0.05);
        let a = branch_and_prune(&p, p.initial_box(), &cfg);
        let b = branch_and_prune(&p, p.initial_box(), &cfg);
        assert_eq!(a.solutions, b.solutions);
        assert!(!a.solutions.is_empty());
    }

    #[test]
    fn rejected_boxes_hold_no_satisfying_samples() {
        // Rejections at the first level of a small problem: sample points of
        // each rejected box must violate some constraint.
        let p = example_sphere();
        let cfg = SolverConfig::default();
        let contractor = cfg.contractor(p.constraints());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut boxes = vec![p.initial_box().clone()];
        for _ in 0..4 {
            boxes = boxes
                .iter()
                .flat_map(|b| {
                    let (l, r) = b.bisect(b.widest_dim().unwrap()).unwrap();
                    [l, r]
                })
                .collect();
        }
        for b in boxes {
            let mut c = b.clone();
            if contractor.contract(&mut c) {
                continue;
            }
            for _ in 0..1000 {
                let x: Vec<f64> = b
                    .dims()
                    .iter()
                    .map(|d| rng.gen_range(d.lo()..=d.hi()))
                    .collect();
                assert!(p.max_violation(&x) > 0.0);
            }
        }
    }

    #[test]
    fn contraction_is_sound_and_monotone() {
        let p = cyclic_n_roots(4);
        let contractor = SolverConfig::default().contractor(p.constraints());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // The cyclic-4 solution curve contains (t, -1/t, -t, 1/t).
        for _ in 0..200 {
            let t: f64 = rng.gen_range(0.2..3.0);
            let x = [t, -1.0 / t, -t, 1.0 / t];
            let b = IntervalBox::new(
                x.iter()
                    .map(|&v| {
                        let lo = v - rng.gen_range(0.0..2.0);
                        let hi = v + rng.gen_range(0.0..2.0);
                        iv(lo, hi)
                    })
                    .collect(),
            );
            let mut c = b.clone();
            assert!(contractor.contract(&mut c), "lost a solution in {b}");
            assert!(c.is_subset_of(&b));
            assert!(c.contains_point(&x), "{x:?} not in {c}");
            for s in 1..4 {
                let sx = CycleSymmetry::full(4).apply_point(&x, s);
                assert!(p.max_violation(&sx) < 1e-9);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::with_epsilon(0.0).validate().is_err());
        assert!(SolverConfig::with_epsilon(f64::NAN).validate().is_err());
        assert!(SolverConfig {
            max_boxes: 0,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(SolverConfig::default().validate().is_ok());
    }

    #[test]
    fn eval_expr_examples() {
        let e = Expr::sum_of((0..3).map(|i| Expr::var(i).pow(2)));
        assert_eq!(
            eval_expr(&e, &IntervalBox::cube(3, iv(-1.0, 1.0))).unwrap(),
            iv(0.0, 3.0)
        );
    }
}
