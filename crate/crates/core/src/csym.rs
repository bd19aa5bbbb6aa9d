//! Symmetry-exploiting solve for problems invariant under one variable
//! cycle of length `k`.
//!
//! The cycle variables must share one domain `[x_l, x_h]`. Bisecting it at
//! `x*` in all `k` dimensions gives `2^k` subboxes, which fall into rotation
//! classes. Only one representative per class is handed to the solver; the
//! solutions found inside it are copied into the other members of its class
//! by applying the box symmetry `S^i` for `i = 1 … P-1`, where `P` is the
//! period of the representative. The solved fraction of the domain is
//! `N_k / 2^k`.

use rayon::prelude::*;
use thiserror::Error;

use crate::codes::{for_each_class, ClassCode, MAX_COUNT_N};
use crate::interval::{Interval, IntervalBox};
use crate::problems::Problem;
use crate::solver::{
    solve_with, ConfigError, Contractor, Provenance, SolutionBox, SolutionSet, SolveStats,
    SolverConfig,
};
use crate::symmetry::CycleSymmetry;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CsymError {
    #[error("problem declares no cycle symmetry")]
    NoSymmetry,
    #[error("cycle of length {0} is too short; need at least 2 variables")]
    CycleTooShort(usize),
    #[error("cycle variables do not share one non-degenerate interval: {detail}")]
    NotACube { detail: String },
    #[error("bisection point {x} is not strictly inside ({lo}, {hi})")]
    OutOfRange { x: f64, lo: f64, hi: f64 },
    #[error("code has {got} bits but the cycle has {expected} variables")]
    CodeLength { got: usize, expected: usize },
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum BisectionPolicy {
    #[default]
    Midpoint,
    Fixed(f64),
}

pub fn select_bisection_point(
    x_l: f64,
    x_h: f64,
    policy: BisectionPolicy,
) -> Result<f64, CsymError> {
    let x = match policy {
        BisectionPolicy::Midpoint => Interval::new(x_l, x_h)
            .map_err(|_| CsymError::OutOfRange {
                x: f64::NAN,
                lo: x_l,
                hi: x_h,
            })?
            .mid(),
        BisectionPolicy::Fixed(x) => x,
    };
    if x_l < x && x < x_h {
        Ok(x)
    } else {
        Err(CsymError::OutOfRange {
            x,
            lo: x_l,
            hi: x_h,
        })
    }
}

/// The shared interval of the cycle dimensions of `b`.
pub fn cycle_side(b: &IntervalBox, sym: &CycleSymmetry) -> Result<Interval, CsymError> {
    let dims = b.dims();
    let first = dims[sym.cycle()[0]];
    if let Some(&j) = sym.cycle().iter().find(|&&j| dims[j] != first) {
        return Err(CsymError::NotACube {
            detail: format!(
                "variable {} has {} but variable {} has {}",
                sym.cycle()[0] + 1,
                first,
                j + 1,
                dims[j]
            ),
        });
    }
    if first.lo() >= first.hi() || !first.is_bounded() {
        return Err(CsymError::NotACube {
            detail: format!("shared interval {first} is degenerate or unbounded"),
        });
    }
    Ok(first)
}

/// Subbox of `full_box` selected by `code`: cycle position `j` takes
/// `[x_l, x*]` when bit `j` is 0 and `[x*, x_h]` when it is 1. Other
/// dimensions are copied.
pub fn generate_subbox(
    code: &ClassCode,
    x_l: f64,
    x_h: f64,
    x_star: f64,
    full_box: &IntervalBox,
    sym: &CycleSymmetry,
) -> Result<IntervalBox, CsymError> {
    let side = cycle_side(full_box, sym)?;
    if side.lo() != x_l || side.hi() != x_h {
        return Err(CsymError::NotACube {
            detail: format!("cycle interval {side} differs from [{x_l}, {x_h}]"),
        });
    }
    if code.n() != sym.len() {
        return Err(CsymError::CodeLength {
            got: code.n(),
            expected: sym.len(),
        });
    }
    let low = Interval::new(x_l, x_star).map_err(|_| CsymError::OutOfRange {
        x: x_star,
        lo: x_l,
        hi: x_h,
    })?;
    let high = Interval::new(x_star, x_h).map_err(|_| CsymError::OutOfRange {
        x: x_star,
        lo: x_l,
        hi: x_h,
    })?;
    let mut b = full_box.clone();
    for (&var, &bit) in sym.cycle().iter().zip(code.to_binary().bits()) {
        b.dims_mut()[var] = if bit { high } else { low };
    }
    Ok(b)
}

/// Per-representative outcome of a symmetric solve.
#[derive(Debug, Clone)]
pub struct RepresentativeReport {
    pub code: ClassCode,
    pub period: usize,
    pub stats: SolveStats,
    /// Solution boxes found by the solver inside the representative.
    pub ccs_solutions: usize,
    /// `ccs_solutions × period`.
    pub expanded_solutions: usize,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone)]
pub struct CsymReport {
    pub cycle_len: usize,
    pub x_star: f64,
    pub per_representative: Vec<RepresentativeReport>,
    /// Sum of the per-representative counters.
    pub totals: SolveStats,
    /// Representatives solved, `N_k`.
    pub representatives: usize,
    /// Subboxes of the bisected cube, `2^k`.
    pub subboxes: u128,
    /// `subboxes / representatives`.
    pub ifdp: f64,
    /// Expanded solution boxes over solution boxes found in representatives;
    /// 0 when nothing was found.
    pub expansion_factor: f64,
    pub budget_exceeded: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CsymOptions {
    pub bisection: BisectionPolicy,
    /// Worker threads for representative solves; 0 or 1 runs sequentially.
    pub parallel: usize,
}

/// Solves one representative box and copies its solutions around the class.
pub fn process_representative(
    rep_index: usize,
    rep: &IntervalBox,
    sym: &CycleSymmetry,
    contractor: &Contractor,
    cfg: &SolverConfig,
) -> (SolutionSet, SolveStats, usize, bool) {
    let out = solve_with(contractor, rep, cfg);
    let period = sym.box_period(rep);
    let mut boxes = Vec::with_capacity(out.solutions.len() * period);
    for shift in 0..period {
        boxes.extend(out.solutions.iter().map(|b| SolutionBox {
            bounds: sym.apply_box(b, shift),
            provenance: Provenance {
                representative: rep_index,
                shift,
            },
        }));
    }
    (
        SolutionSet { boxes },
        out.stats,
        out.solutions.len(),
        out.budget_exceeded,
    )
}

/// Every subbox of the bisected cube, as `(representative, shift, box)` in
/// representative order.
pub fn class_partition(
    full_box: &IntervalBox,
    sym: &CycleSymmetry,
    x_star: f64,
) -> Result<Vec<(usize, usize, IntervalBox)>, CsymError> {
    let side = cycle_side(full_box, sym)?;
    let reps = representatives(sym.len());
    let mut out = Vec::new();
    for (i, code) in reps.iter().enumerate() {
        let rep = generate_subbox(code, side.lo(), side.hi(), x_star, full_box, sym)?;
        for (shift, b) in sym.box_class(&rep).into_iter().enumerate() {
            out.push((i, shift, b));
        }
    }
    Ok(out)
}

fn representatives(k: usize) -> Vec<ClassCode> {
    let mut codes = Vec::new();
    for_each_class(k, |_, _, runs| {
        codes.push(if runs.is_empty() {
            ClassCode::all_zeros(k)
        } else {
            ClassCode::from_runs(runs.to_vec())
        })
    });
    codes
}

/// Symmetric solve of `p` over its initial box.
pub fn csym1(
    p: &Problem,
    cfg: &SolverConfig,
    opts: &CsymOptions,
) -> Result<(SolutionSet, CsymReport), CsymError> {
    cfg.validate()?;
    let sym = p.symmetry().ok_or(CsymError::NoSymmetry)?;
    let k = sym.len();
    if k < 2 {
        return Err(CsymError::CycleTooShort(k));
    }
    let full = p.initial_box();
    let side = cycle_side(full, sym)?;
    let x_star = select_bisection_point(side.lo(), side.hi(), opts.bisection)?;
    let codes = representatives(k);
    let boxes = codes
        .iter()
        .map(|c| generate_subbox(c, side.lo(), side.hi(), x_star, full, sym))
        .collect::<Result<Vec<_>, _>>()?;
    let contractor = cfg.contractor(p.constraints());

    let solve = |(i, b): (usize, &IntervalBox)| process_representative(i, b, sym, &contractor, cfg);
    let results: Vec<_> = if opts.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.parallel)
            .build()
            .expect("thread pool");
        pool.install(|| boxes.par_iter().enumerate().map(solve).collect())
    } else {
        boxes.iter().enumerate().map(solve).collect()
    };

    let mut all = SolutionSet::default();
    let mut per = Vec::with_capacity(codes.len());
    let mut totals = SolveStats::default();
    let mut found = 0usize;
    let mut budget_exceeded = false;
    for ((code, rep_box), (set, stats, n_ccs, over)) in codes.into_iter().zip(&boxes).zip(results) {
        let period = sym.box_period(rep_box);
        debug_assert_eq!(period, code.period());
        totals += stats;
        found += n_ccs;
        budget_exceeded |= over;
        per.push(RepresentativeReport {
            code,
            period,
            stats,
            ccs_solutions: n_ccs,
            expanded_solutions: set.len(),
            budget_exceeded: over,
        });
        all.boxes.extend(set.boxes);
    }
    let representatives = per.len();
    let subboxes = if k < 128 { 1u128 << k } else { u128::MAX };
    let report = CsymReport {
        cycle_len: k,
        x_star,
        totals,
        representatives,
        subboxes,
        ifdp: subboxes as f64 / representatives as f64,
        expansion_factor: if found == 0 {
            0.0
        } else {
            all.len() as f64 / found as f64
        },
        budget_exceeded,
        per_representative: per,
    };
    debug_assert!(
        k as u32 > MAX_COUNT_N || representatives as u128 == crate::codes::count_n(k as u32)
    );
    Ok((all, report))
}

/// True when every box center of `a` lies within `tol` (max-norm) of some
/// box of `b`, and vice versa.
pub fn two_sided_cover(a: &[IntervalBox], b: &[IntervalBox], tol: f64) -> bool {
    covers(a, b, tol) && covers(b, a, tol)
}

fn covers(from: &[IntervalBox], to: &[IntervalBox], tol: f64) -> bool {
    from.iter().all(|f| {
        let c = f.midpoint();
        to.iter().any(|t| distance_to_box(&c, t) <= tol)
    })
}

fn distance_to_box(x: &[f64], b: &IntervalBox) -> f64 {
    x.iter()
        .zip(b.dims())
        .map(|(&v, d)| (d.lo() - v).max(v - d.hi()).max(0.0))
        .fold(0.0, f64::max)
}
