//! Single-cycle variable permutations acting on points and boxes.
//!
//! A [`CycleSymmetry`] lists the variables `c_0 … c_{k-1}` of one cycle; one
//! application moves the value of `c_{j+1}` into `c_j` (indices mod `k`), so
//! for the full cycle over three variables `(x1, x2, x3) ↦ (x2, x3, x1)`.
//! Variables outside the cycle are fixed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::interval::IntervalBox;
use crate::problems::Problem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("cycle index {index} out of range for {n_vars} variables")]
    IndexOutOfRange { index: usize, n_vars: usize },
    #[error("variable {0} appears twice in the cycle")]
    RepeatedIndex(usize),
    #[error("cycle is empty")]
    EmptyCycle,
    #[error("constraint permutation is not a bijection on {0} constraints")]
    NotBijective(usize),
    #[error("dimension mismatch: {what} has {got}, problem has {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSymmetry {
    n_vars: usize,
    cycle: Vec<usize>,
}

impl CycleSymmetry {
    pub fn new(n_vars: usize, cycle: Vec<usize>) -> Result<Self, SymmetryError> {
        if cycle.is_empty() {
            return Err(SymmetryError::EmptyCycle);
        }
        let mut seen = vec![false; n_vars];
        for &i in &cycle {
            if i >= n_vars {
                return Err(SymmetryError::IndexOutOfRange { index: i, n_vars });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(SymmetryError::RepeatedIndex(i));
            }
        }
        Ok(CycleSymmetry { n_vars, cycle })
    }

    /// The cycle `(0 1 … n-1)` over all variables.
    pub fn full(n_vars: usize) -> Self {
        CycleSymmetry {
            n_vars,
            cycle: (0..n_vars).collect(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    /// Cycle length `k`.
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    fn permute<T: Clone>(&self, xs: &[T], times: usize) -> Vec<T> {
        let k = self.cycle.len();
        let t = times % k;
        let mut out = xs.to_vec();
        for j in 0..k {
            out[self.cycle[j]] = xs[self.cycle[(j + t) % k]].clone();
        }
        out
    }

    pub fn apply_point(&self, x: &[f64], times: usize) -> Vec<f64> {
        assert_eq!(x.len(), self.n_vars);
        self.permute(x, times)
    }

    pub fn apply_box(&self, b: &IntervalBox, times: usize) -> IntervalBox {
        assert_eq!(b.len(), self.n_vars);
        IntervalBox::new(self.permute(b.dims(), times))
    }

    /// Smallest `i ≥ 1` with `S^i(b) = b`.
    pub fn box_period(&self, b: &IntervalBox) -> usize {
        let k = self.cycle.len();
        let d = b.dims();
        (1..=k)
            .find(|&p| {
                k.is_multiple_of(p)
                    && (0..k).all(|j| d[self.cycle[j]] == d[self.cycle[(j + p) % k]])
            })
            .unwrap_or(k)
    }

    /// The distinct images `S^0(b), …, S^{P-1}(b)`.
    pub fn box_class(&self, b: &IntervalBox) -> Vec<IntervalBox> {
        (0..self.box_period(b))
            .map(|i| self.apply_box(b, i))
            .collect()
    }
}

/// Maps constraint `i` to `σ(i)` with `f_i(s(x)) = f_σ(i)(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintPermutation {
    map: Vec<usize>,
}

impl ConstraintPermutation {
    /// From 0-based images; `map[i] = σ(i)`.
    pub fn new(map: Vec<usize>) -> Result<Self, SymmetryError> {
        let m = map.len();
        let mut seen = vec![false; m];
        for &j in &map {
            if j >= m || std::mem::replace(&mut seen[j], true) {
                return Err(SymmetryError::NotBijective(m));
            }
        }
        Ok(ConstraintPermutation { map })
    }

    pub fn identity(m: usize) -> Self {
        ConstraintPermutation {
            map: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

/// Relative tolerance of the numeric symmetry check.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SYMMETRY_SAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum SymmetryVerdict {
    Holds,
    /// `C_i ≠ C_σ(i)` for this 0-based constraint index.
    RangeMismatch {
        constraint: usize,
    },
    /// `f_i(s(x))` and `f_σ(i)(x)` differ at `point`.
    ValueMismatch {
        constraint: usize,
        point: Vec<f64>,
        shifted_value: f64,
        image_value: f64,
    },
}

impl SymmetryVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SymmetryVerdict::Holds)
    }

    pub fn failing_constraint(&self) -> Option<usize> {
        match self {
            SymmetryVerdict::Holds => None,
            SymmetryVerdict::RangeMismatch { constraint }
            | SymmetryVerdict::ValueMismatch { constraint, .. } => Some(*constraint),
        }
    }
}

/// Numerically checks that `sym` with `sigma` is a symmetry of `p` at
/// `n_samples` random points of the initial box. Not a proof.
pub fn verify_symmetry(
    p: &Problem,
    sym: &CycleSymmetry,
    sigma: &ConstraintPermutation,
    n_samples: usize,
    seed: u64,
) -> Result<SymmetryVerdict, SymmetryError> {
    if sym.n_vars() != p.n_vars() {
        return Err(SymmetryError::DimensionMismatch {
            what: "symmetry",
            got: sym.n_vars(),
            expected: p.n_vars(),
        });
    }
    let cs = p.constraints();
    if sigma.len() != cs.len() {
        return Err(SymmetryError::DimensionMismatch {
            what: "sigma",
            got: sigma.len(),
            expected: cs.len(),
        });
    }
    for (i, c) in cs.iter().enumerate() {
        if c.range != cs[sigma.image(i)].range {
            return Ok(SymmetryVerdict::RangeMismatch { constraint: i });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = p.initial_box().dims();
    for _ in 0..n_samples {
        let x: Vec<f64> = dims
            .iter()
            .map(|d| {
                let lo = d.lo().max(-1e6);
                let hi = d.hi().min(1e6);
                if lo < hi {
                    rng.gen_range(lo..=hi)
                } else {
                    lo
                }
            })
            .collect();
        let sx = sym.apply_point(&x, 1);
        for (i, c) in cs.iter().enumerate() {
            let lhs = c.expr.eval(&sx);
            let rhs = cs[sigma.image(i)].expr.eval(&x);
            let scale = 1f64.max(lhs.abs()).max(rhs.abs());
            // Written so that a NaN difference counts as a mismatch.
            let close = (lhs - rhs).abs() <= SYMMETRY_TOLERANCE * scale;
            if !close {
                return Ok(SymmetryVerdict::ValueMismatch {
                    constraint: i,
                    point: x,
                    shifted_value: lhs,
                    image_value: rhs,
                });
            }
        }
    }
    Ok(SymmetryVerdict::Holds)
}
