//! Closed intervals with outward-rounded arithmetic, and axis-aligned boxes.
//!
//! Endpoints are `f64` and may be infinite. Every operation returns an
//! enclosure of the exact real result: when the host arithmetic rounds,
//! the lower endpoint is moved down and the upper endpoint up. Results that
//! are exactly representable are returned exactly, which is why
//! `[1, 2] + [3, 4]` yields `[4, 6]` and not a one-ulp-wider interval.
//!
//! There is no empty interval value. Operations that can produce an empty
//! set (intersection, projections) return `Option<Interval>`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("invalid interval bounds [{lo}, {hi}]")]
    InvalidBounds { lo: f64, hi: f64 },
    #[error("dimension {dim} has zero width and cannot be bisected")]
    ZeroWidthDim { dim: usize },
    #[error("dimension {dim} out of range for a box of {len} dimensions")]
    DimOutOfRange { dim: usize, len: usize },
}

// Directed-rounding helpers. Each returns a bound on the exact result of the
// real operation, tight whenever the float result is exact.

fn two_sum_err(a: f64, b: f64, s: f64) -> f64 {
    let bb = s - a;
    (a - (s - bb)) + (b - bb)
}

pub(crate) fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.is_nan() {
        return f64::NEG_INFINITY;
    }
    if s.is_infinite() {
        if a.is_finite() && b.is_finite() && s > 0.0 {
            return f64::MAX;
        }
        return s;
    }
    if two_sum_err(a, b, s) < 0.0 {
        s.next_down()
    } else {
        s
    }
}

pub(crate) fn add_up(a: f64, b: f64) -> f64 {
    -add_down(-a, -b)
}

// 0 * inf is taken as 0: an infinite endpoint stands for an unbounded set of
// finite values, all of which multiply to 0.
pub(crate) fn mul_down(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let p = a * b;
    if p.is_infinite() {
        if a.is_finite() && b.is_finite() && p > 0.0 {
            return f64::MAX;
        }
        return p;
    }
    if p.abs() < f64::MIN_POSITIVE {
        // Underflow: the fma residual is unreliable here.
        return p.next_down();
    }
    if a.mul_add(b, -p) < 0.0 {
        p.next_down()
    } else {
        p
    }
}

pub(crate) fn mul_up(a: f64, b: f64) -> f64 {
    -mul_down(-a, b)
}

pub(crate) fn div_down(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return f64::NEG_INFINITY;
    }
    if q.is_infinite() {
        if a.is_finite() && q > 0.0 {
            return f64::MAX;
        }
        return q;
    }
    if !a.is_finite() || !b.is_finite() {
        return q;
    }
    if q.abs() < f64::MIN_POSITIVE {
        return q.next_down();
    }
    // a - q*b exactly; the true quotient is q + r/b.
    let r = (-q).mul_add(b, a);
    if r != 0.0 && (r < 0.0) != (b < 0.0) {
        q.next_down()
    } else {
        q
    }
}

pub(crate) fn div_up(a: f64, b: f64) -> f64 {
    -div_down(-a, b)
}

/// A non-empty closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ENTIRE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(IntervalError::InvalidBounds { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        assert!(x.is_finite(), "point interval needs a finite value");
        Interval { lo: x, hi: x }
    }

    /// Builds an interval from bounds already known to be ordered.
    pub(crate) fn from_ordered(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "unordered bounds [{lo}, {hi}]");
        Interval { lo, hi }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        add_up(self.hi, -self.lo)
    }

    /// Midpoint, always inside the interval. Unbounded sides are clamped to
    /// the largest finite value.
    pub fn mid(&self) -> f64 {
        let lo = self.lo.max(f64::MIN);
        let hi = self.hi.min(f64::MAX);
        let m = lo / 2.0 + hi / 2.0;
        m.clamp(lo, hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        Interval::from_ordered(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        Interval::from_ordered(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }

    pub fn neg(&self) -> Interval {
        Interval::from_ordered(-self.hi, -self.lo)
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = mul_down(a, c)
            .min(mul_down(a, d))
            .min(mul_down(b, c))
            .min(mul_down(b, d));
        let hi = mul_up(a, c)
            .max(mul_up(a, d))
            .max(mul_up(b, c))
            .max(mul_up(b, d));
        Interval::from_ordered(lo, hi)
    }

    /// Quotient, or `None` when the divisor contains zero.
    pub fn div(&self, rhs: &Interval) -> Option<Interval> {
        if rhs.contains_zero() {
            return None;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        let lo = div_down(a, c)
            .min(div_down(a, d))
            .min(div_down(b, c))
            .min(div_down(b, d));
        let hi = div_up(a, c)
            .max(div_up(a, d))
            .max(div_up(b, c))
            .max(div_up(b, d));
        Some(Interval::from_ordered(lo, hi))
    }

    /// Natural power `self^k`. `k = 0` gives `[1, 1]`.
    pub fn powi(&self, k: u32) -> Interval {
        if k == 0 {
            return Interval::point(1.0);
        }
        if k % 2 == 1 {
            return Interval::from_ordered(pow_down(self.lo, k), pow_up(self.hi, k));
        }
        if self.lo >= 0.0 {
            Interval::from_ordered(pow_down(self.lo, k), pow_up(self.hi, k))
        } else if self.hi <= 0.0 {
            Interval::from_ordered(pow_down(self.hi, k), pow_up(self.lo, k))
        } else {
            Interval::from_ordered(0.0, pow_up(self.mag(), k))
        }
    }

    /// Hull of `{y : y^k ∈ self}` intersected with `domain`, or `None` when
    /// that set misses `domain`.
    pub fn inverse_powi(&self, k: u32, domain: &Interval) -> Option<Interval> {
        assert!(k >= 1);
        if k == 1 {
            return self.intersect(domain);
        }
        if k % 2 == 1 {
            let lo = signed_root_down(self.lo, k);
            let hi = signed_root_up(self.hi, k);
            return Interval::from_ordered(lo, hi).intersect(domain);
        }
        let nonneg = self.intersect(&Interval::from_ordered(0.0, f64::INFINITY))?;
        let r_lo = root_down(nonneg.lo, k);
        let r_hi = root_up(nonneg.hi, k);
        let pos = Interval::from_ordered(r_lo, r_hi).intersect(domain);
        let neg = Interval::from_ordered(-r_hi, -r_lo).intersect(domain);
        match (pos, neg) {
            (Some(p), Some(n)) => Some(p.hull(&n)),
            (p, n) => p.or(n),
        }
    }
}

fn pow_down(x: f64, k: u32) -> f64 {
    if x >= 0.0 {
        pow_abs_down(x, k)
    } else if k.is_multiple_of(2) {
        pow_abs_down(-x, k)
    } else {
        -pow_abs_up(-x, k)
    }
}

fn pow_up(x: f64, k: u32) -> f64 {
    if x >= 0.0 {
        pow_abs_up(x, k)
    } else if k.is_multiple_of(2) {
        pow_abs_up(-x, k)
    } else {
        -pow_abs_down(-x, k)
    }
}

fn pow_abs_down(x: f64, k: u32) -> f64 {
    (1..k).fold(x, |acc, _| mul_down(acc, x))
}

fn pow_abs_up(x: f64, k: u32) -> f64 {
    (1..k).fold(x, |acc, _| mul_up(acc, x))
}

// `powf` is not correctly rounded; two ulps of slack keep the roots outward.
fn root_down(x: f64, k: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return f64::MAX;
    }
    let r = if k == 2 {
        x.sqrt()
    } else {
        x.powf(1.0 / k as f64)
    };
    r.next_down().next_down().max(0.0)
}

fn root_up(x: f64, k: u32) -> f64 {
    if x.is_infinite() {
        return f64::INFINITY;
    }
    if x <= 0.0 {
        return 0.0;
    }
    let r = if k == 2 {
        x.sqrt()
    } else {
        x.powf(1.0 / k as f64)
    };
    r.next_up().next_up()
}

fn signed_root_down(x: f64, k: u32) -> f64 {
    if x >= 0.0 {
        root_down(x, k)
    } else {
        -root_up(-x, k)
    }
}

fn signed_root_up(x: f64, k: u32) -> f64 {
    if x >= 0.0 {
        root_up(x, k)
    } else {
        -root_down(-x, k)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// An axis-aligned box: one interval per problem variable.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    dims: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Self {
        IntervalBox { dims }
    }

    pub fn cube(n: usize, side: Interval) -> Self {
        IntervalBox {
            dims: vec![side; n],
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[Interval] {
        &self.dims
    }

    pub fn dims_mut(&mut self) -> &mut [Interval] {
        &mut self.dims
    }

    pub fn into_dims(self) -> Vec<Interval> {
        self.dims
    }

    pub fn volume(&self) -> f64 {
        self.dims.iter().map(Interval::width).product()
    }

    pub fn max_width(&self) -> f64 {
        self.dims.iter().map(Interval::width).fold(0.0, f64::max)
    }

    /// Index of the widest dimension, lowest index on ties.
    pub fn widest_dim(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, d) in self.dims.iter().enumerate() {
            let w = d.width();
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((i, w));
            }
        }
        best.map(|(i, _)| i)
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.dims.iter().map(Interval::mid).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dims.len() && self.dims.iter().zip(x).all(|(d, &v)| d.contains(v))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dims.len() == other.dims.len()
            && self
                .dims
                .iter()
                .zip(&other.dims)
                .all(|(a, b)| a.is_subset_of(b))
    }

    pub fn intersect(&self, other: &IntervalBox) -> Option<IntervalBox> {
        assert_eq!(self.len(), other.len());
        self.dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(IntervalBox::new)
    }

    /// True when the interiors of the two boxes overlap.
    pub fn interiors_overlap(&self, other: &IntervalBox) -> bool {
        self.dims
            .iter()
            .zip(&other.dims)
            .all(|(a, b)| a.lo.max(b.lo) < a.hi.min(b.hi))
    }

    /// Splits `dim` at its midpoint.
    pub fn bisect(&self, dim: usize) -> Result<(IntervalBox, IntervalBox), IntervalError> {
        let d = *self.dims.get(dim).ok_or(IntervalError::DimOutOfRange {
            dim,
            len: self.dims.len(),
        })?;
        self.split_at(dim, d.mid())
    }

    /// Splits `dim` at `at`, which must lie inside the dimension.
    pub fn split_at(
        &self,
        dim: usize,
        at: f64,
    ) -> Result<(IntervalBox, IntervalBox), IntervalError> {
        let d = *self.dims.get(dim).ok_or(IntervalError::DimOutOfRange {
            dim,
            len: self.dims.len(),
        })?;
        if d.lo >= d.hi {
            return Err(IntervalError::ZeroWidthDim { dim });
        }
        let at = at.clamp(d.lo, d.hi);
        let mut left = self.clone();
        let mut right = self.clone();
        left.dims[dim] = Interval::from_ordered(d.lo, at);
        right.dims[dim] = Interval::from_ordered(at, d.hi);
        Ok((left, right))
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.dims.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl From<Vec<Interval>> for IntervalBox {
    fn from(dims: Vec<Interval>) -> Self {
        IntervalBox::new(dims)
    }
}
