//! Interval branch-and-prune solving with cyclic symmetry exploitation,
//! plus generation and counting of binary rotation classes.

pub mod codes;
pub mod csym;
pub mod interval;
pub mod problems;
pub mod solver;
pub mod symmetry;

pub use codes::{build_sr, classgen, code_validity, BitString, ClassCode, CodeError, SrSet};
pub use csym::{csym1, BisectionPolicy, CsymError, CsymOptions, CsymReport};
pub use interval::{Interval, IntervalBox, IntervalError};
pub use problems::{parse_problem, Constraint, Expr, ParseError, Problem, ProblemError};
pub use solver::{
    branch_and_prune, ConfigError, Provenance, SolutionBox, SolutionSet, SolveOutcome, SolveStats,
    SolverConfig,
};
pub use symmetry::{
    verify_symmetry, ConstraintPermutation, CycleSymmetry, SymmetryError, SymmetryVerdict,
};
