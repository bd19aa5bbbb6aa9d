//! Solve driver shared by the `solve` command and the tests.

use std::time::{Duration, Instant};

use symprune::csym::{csym1, two_sided_cover, BisectionPolicy, CsymOptions, CsymReport};
use symprune::solver::{branch_and_prune, cluster_boxes, newton_refine};
use symprune::{
    CsymError, IntervalBox, Problem, Provenance, SolutionSet, SolveStats, SolverConfig,
};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Plain,
    Csym,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Plain => "plain",
            Mode::Csym => "csym",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub config: SolverConfig,
    pub bisection: BisectionPolicy,
    pub parallel: usize,
    pub use_symmetry: bool,
    /// Largest gap between boxes of one cluster; `None` means `100 ε`.
    pub cluster_gap: Option<f64>,
}

impl Default for SolveRequest {
    fn default() -> Self {
        SolveRequest {
            config: SolverConfig::default(),
            bisection: BisectionPolicy::Midpoint,
            parallel: 1,
            use_symmetry: true,
            cluster_gap: None,
        }
    }
}

impl SolveRequest {
    pub fn cluster_gap(&self) -> f64 {
        self.cluster_gap.unwrap_or(100.0 * self.config.epsilon)
    }
}

#[derive(Debug, Clone)]
pub struct ClusterSummary {
    pub count: usize,
    pub gap: f64,
    /// Largest constraint violation at a cluster center after one Newton
    /// step; `None` without clusters.
    pub max_refined_residual: Option<f64>,
    pub refined_centers: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct SolveRun {
    pub mode: Mode,
    pub solutions: SolutionSet,
    pub stats: SolveStats,
    pub csym: Option<CsymReport>,
    pub elapsed: Duration,
    pub budget_exceeded: bool,
    pub clusters: ClusterSummary,
    /// Why symmetry was not used although it was allowed.
    pub note: Option<String>,
}

pub fn summarize_clusters(p: &Problem, boxes: &[IntervalBox], gap: f64) -> ClusterSummary {
    let clusters = cluster_boxes(boxes, gap);
    let refined_centers: Vec<Vec<f64>> = clusters
        .iter()
        .map(|c| newton_refine(p, &c.center()))
        .collect();
    let max_refined_residual = refined_centers
        .iter()
        .map(|x| p.max_violation(x))
        .reduce(f64::max);
    ClusterSummary {
        count: clusters.len(),
        gap,
        max_refined_residual,
        refined_centers,
    }
}

pub fn run_solve(p: &Problem, req: &SolveRequest) -> Result<SolveRun, CliError> {
    req.config.validate()?;
    let start = Instant::now();
    let symmetric = if !req.use_symmetry {
        Err(None)
    } else {
        let opts = CsymOptions {
            bisection: req.bisection,
            parallel: req.parallel,
        };
        match csym1(p, &req.config, &opts) {
            Ok(r) => Ok(r),
            Err(e @ (CsymError::NoSymmetry | CsymError::CycleTooShort(_))) => {
                Err(Some(format!("{e}; solved without symmetry")))
            }
            Err(e) => return Err(e.into()),
        }
    };
    let (mode, solutions, stats, csym, budget_exceeded, note) = match symmetric {
        Ok((set, report)) => (
            Mode::Csym,
            set,
            report.totals,
            Some(report.clone()),
            report.budget_exceeded,
            None,
        ),
        Err(note) => {
            let out = branch_and_prune(p, p.initial_box(), &req.config);
            let (stats, over) = (out.stats, out.budget_exceeded);
            (
                Mode::Plain,
                out.into_solution_set(Provenance::default()),
                stats,
                None,
                over,
                note,
            )
        }
    };
    let elapsed = start.elapsed();
    let boxes: Vec<IntervalBox> = solutions.bounds().cloned().collect();
    let clusters = summarize_clusters(p, &boxes, req.cluster_gap());
    Ok(SolveRun {
        mode,
        solutions,
        stats,
        csym,
        elapsed,
        budget_exceeded,
        clusters,
        note,
    })
}

/// A plain solve run next to a symmetric one.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub plain: SolveRun,
    /// Plain wall time over symmetric wall time.
    pub time_gain: f64,
    /// Plain processed boxes over symmetric processed boxes.
    pub box_gain: f64,
    pub tolerance: f64,
    pub cover_equivalent: bool,
}

/// Runs the plain solver with the same settings as `run` and compares the
/// box sets within `2 ε`.
pub fn compare_with_plain(
    p: &Problem,
    req: &SolveRequest,
    run: &SolveRun,
) -> Result<Comparison, CliError> {
    let plain_req = SolveRequest {
        use_symmetry: false,
        ..req.clone()
    };
    let plain = run_solve(p, &plain_req)?;
    let tolerance = 2.0 * req.config.epsilon;
    let a: Vec<IntervalBox> = run.solutions.bounds().cloned().collect();
    let b: Vec<IntervalBox> = plain.solutions.bounds().cloned().collect();
    Ok(Comparison {
        time_gain: plain.elapsed.as_secs_f64() / run.elapsed.as_secs_f64().max(1e-9),
        box_gain: plain.stats.boxes_processed as f64 / run.stats.boxes_processed.max(1) as f64,
        tolerance,
        cover_equivalent: two_sided_cover(&a, &b, tolerance),
        plain,
    })
}
