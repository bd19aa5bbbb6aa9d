//! Rotation classes of the `2^n` subboxes produced by bisecting an n-cube in
//! every dimension at one shared point.
//!
//! A subbox is a binary string: bit `i` says whether dimension `i` took the
//! lower (`0`) or upper (`1`) half. Two subboxes are symmetric under the
//! cyclic shift of variables exactly when their strings are rotations of
//! each other, so the classes are binary necklaces of length `n`.
//!
//! Strings ending in `1` are stored as zero-run codes: the `j`-th entry is
//! the number of `0`s immediately before the `j`-th `1`. `0100010111`
//! becomes `[1, 3, 1, 0, 0]`. Every class other than the all-zeros one has a
//! member ending in `1`; the chosen representative is the one whose run chain
//! is lexicographically largest, which is also the smallest binary string of
//! the class.
//!
//! Full-period representatives with `m` ones are generated directly by
//! [`classgen`]; lower periods come from repeating a shorter full-period
//! block ([`expand_lower_period`]). [`build_sr`] assembles the whole set.
//! The `count_*` functions give the class counts in closed recurrences.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Largest `n` accepted by the exact counting functions.
pub const MAX_COUNT_N: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("binary string ends in 0 and is not all zeros")]
    TrailingZero,
    #[error("empty binary string")]
    Empty,
    #[error("invalid character {0:?} in binary string")]
    BadDigit(char),
    #[error("run chain sums to {sum} but {n} bits with {m} ones need {expected}")]
    RunSumMismatch {
        n: usize,
        m: usize,
        sum: usize,
        expected: usize,
    },
}

/// A fixed-length string of bits, written most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// Left rotation by `k`: bit `i` of the result is bit `i + k` of `self`.
    pub fn rotate_left(&self, k: usize) -> BitString {
        let mut bits = self.0.clone();
        if !bits.is_empty() {
            bits.rotate_left(k % self.0.len());
        }
        BitString(bits)
    }

    /// Smallest rotation in string order.
    pub fn min_rotation(&self) -> BitString {
        (0..self.len().max(1))
            .map(|k| self.rotate_left(k))
            .min()
            .unwrap_or_else(|| self.clone())
    }

    /// Smallest `p ≥ 1` with `rotate_left(p) == self`.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[(i + p) % n]))
            .unwrap_or(n)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CodeError::BadDigit(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

/// Zero-run encoding of a class member, or the all-zeros sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassCode {
    runs: Vec<u32>,
    n: usize,
}

impl ClassCode {
    /// Builds a code from its run chain. The bit length is `m + Σ runs`.
    pub fn from_runs(runs: Vec<u32>) -> Self {
        assert!(!runs.is_empty(), "use ClassCode::all_zeros for m = 0");
        let n = runs.len() + runs.iter().map(|&r| r as usize).sum::<usize>();
        ClassCode { runs, n }
    }

    /// Builds a code and checks it against a declared bit length.
    pub fn with_len(runs: Vec<u32>, n: usize) -> Result<Self, CodeError> {
        let m = runs.len();
        let sum: usize = runs.iter().map(|&r| r as usize).sum();
        if m == 0 || sum + m != n {
            return Err(CodeError::RunSumMismatch {
                n,
                m,
                sum,
                expected: n.saturating_sub(m),
            });
        }
        Ok(ClassCode { runs, n })
    }

    pub fn all_zeros(n: usize) -> Self {
        ClassCode {
            runs: Vec::new(),
            n,
        }
    }

    pub fn is_all_zeros(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[u32] {
        &self.runs
    }

    /// Number of ones.
    pub fn ones(&self) -> usize {
        self.runs.len()
    }

    /// Total number of bits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_binary(&self) -> BitString {
        code_to_binary(self)
    }

    pub fn period(&self) -> usize {
        code_period(self)
    }
}

/// Runs concatenated as digits when every run is below 10, space separated
/// otherwise; `-` for the all-zeros code.
impl fmt::Display for ClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("-");
        }
        let sep = if self.runs.iter().all(|&r| r < 10) {
            ""
        } else {
            " "
        };
        for (i, r) in self.runs.iter().enumerate() {
            if i > 0 {
                f.write_str(sep)?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Orders run chains as numbers of a common base: lexicographically.
pub fn compare_runs(a: &[u32], b: &[u32]) -> Ordering {
    a.cmp(b)
}

pub fn code_to_binary(c: &ClassCode) -> BitString {
    if c.is_all_zeros() {
        return BitString::zeros(c.n);
    }
    let mut bits = Vec::with_capacity(c.n);
    for &r in &c.runs {
        bits.extend(std::iter::repeat_n(false, r as usize));
        bits.push(true);
    }
    BitString(bits)
}

pub fn binary_to_code(s: &BitString) -> Result<ClassCode, CodeError> {
    let bits = s.bits();
    match bits.last() {
        None => return Err(CodeError::Empty),
        Some(false) if bits.iter().any(|&b| b) => return Err(CodeError::TrailingZero),
        Some(false) => return Ok(ClassCode::all_zeros(bits.len())),
        Some(true) => {}
    }
    let mut runs = Vec::new();
    let mut zeros = 0u32;
    for &b in bits {
        if b {
            runs.push(zeros);
            zeros = 0;
        } else {
            zeros += 1;
        }
    }
    Ok(ClassCode {
        runs,
        n: bits.len(),
    })
}

/// Rotation period of the decoded string, computed on the run chain: if the
/// chain repeats with period `d` (in runs), the bit string repeats every
/// `n·d/m` bits.
pub fn code_period(c: &ClassCode) -> usize {
    if c.is_all_zeros() {
        return 1;
    }
    let m = c.runs.len();
    let d = (1..=m)
        .find(|&d| m.is_multiple_of(d) && (d..m).all(|i| c.runs[i] == c.runs[i - d]))
        .unwrap_or(m);
    c.n * d / m
}

/// Single left-to-right scan deciding whether a code is a full-period class
/// representative, i.e. strictly larger than every proper suffix compared
/// against the prefix of the same length.
///
/// `ctrol` tracks the end of the head sub-chain currently matched against
/// the tail. Falling below it settles compatibility for the current position
/// and every pending one; matching it postpones the decision.
pub fn code_validity(c: &ClassCode) -> bool {
    if c.is_all_zeros() {
        return c.n == 1;
    }
    let a = &c.runs;
    let m = a.len();
    if m == 1 {
        return true;
    }
    let mut ctrol = 0;
    for &v in &a[1..m - 1] {
        match v.cmp(&a[ctrol]) {
            Ordering::Greater => return false,
            Ordering::Less => ctrol = 0,
            Ordering::Equal => ctrol += 1,
        }
    }
    a[m - 1] < a[ctrol]
}

/// Calls `emit` with the run chain of every full-period representative of
/// `n` bits with `m` ones, in decreasing order.
///
/// Run values are bounded while they are written so that only codes passing
/// [`code_validity`] are completed, except at the last position where a
/// periodic chain may still be rejected.
pub fn classgen_each<F: FnMut(&[u32])>(n: usize, m: usize, mut emit: F) {
    assert!(
        m >= 1 && m <= n,
        "classgen needs 1 <= m <= n (n={n}, m={m})"
    );
    if m == 1 {
        emit(&[(n - 1) as u32]);
        return;
    }
    let mut runs = vec![0u32; m];
    classgen_rec((n - m) as u32, 0, 0, &mut runs, &mut emit);
}

fn classgen_rec<F: FnMut(&[u32])>(
    sum: u32,
    pos: usize,
    ctrol: usize,
    runs: &mut [u32],
    emit: &mut F,
) {
    let m = runs.len();
    if pos == m - 1 {
        if sum < runs[ctrol] {
            runs[pos] = sum;
            emit(runs);
        }
        return;
    }
    let (lower, upper) = if pos == 0 {
        (sum.div_ceil(m as u32), sum)
    } else {
        (0, runs[ctrol].min(sum))
    };
    for v in (lower..=upper).rev() {
        runs[pos] = v;
        let next_ctrol = if pos != 0 && v == runs[ctrol] {
            ctrol + 1
        } else {
            0
        };
        classgen_rec(sum - v, pos + 1, next_ctrol, runs, emit);
    }
}

/// Full-period representatives of `n` bits with `m` ones, decreasing.
pub fn classgen(n: usize, m: usize) -> Vec<ClassCode> {
    let mut out = Vec::new();
    classgen_each(n, m, |runs| {
        out.push(ClassCode {
            runs: runs.to_vec(),
            n,
        })
    });
    out
}

/// Repeats each base chain `f` times, giving representatives of period
/// `base.n()` among strings `f` times longer.
pub fn expand_lower_period(base: &[ClassCode], f: usize) -> Vec<ClassCode> {
    assert!(f >= 1);
    base.iter()
        .map(|c| {
            if c.is_all_zeros() {
                return ClassCode::all_zeros(c.n * f);
            }
            ClassCode {
                runs: c.runs.repeat(f),
                n: c.n * f,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassEntry {
    pub code: ClassCode,
    pub period: usize,
}

/// One representative per rotation class of `n`-bit strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrSet {
    pub n: usize,
    pub entries: Vec<ClassEntry>,
}

impl SrSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ periods`, which must equal `2^n`.
    pub fn total_members(&self) -> u128 {
        self.entries.iter().map(|e| e.period as u128).sum()
    }

    /// Minimal rotation of every representative, sorted.
    pub fn canonical_forms(&self) -> Vec<BitString> {
        let mut v: Vec<_> = self
            .entries
            .iter()
            .map(|e| e.code.to_binary().min_rotation())
            .collect();
        v.sort();
        v
    }
}

/// Ascending divisors of `n`.
pub fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Periods admissible for `n` bits with `m` ones: `p | n` with `(n/p) | m`.
pub fn admissible_periods(n: usize, m: usize) -> Vec<usize> {
    let mut ps: Vec<usize> = divisors(gcd(n, m)).into_iter().map(|f| n / f).collect();
    ps.sort_unstable();
    ps
}

/// Streams every class of `n`-bit strings as `(ones, period, runs)`.
///
/// Order: all-zeros first, then by number of ones ascending, within that by
/// period ascending, within a period in [`classgen`] order.
pub fn for_each_class<F: FnMut(usize, usize, &[u32])>(n: usize, mut visit: F) {
    assert!(n >= 1);
    visit(0, 1, &[]);
    let mut buf = Vec::with_capacity(n);
    for m in 1..=n {
        for p in admissible_periods(n, m) {
            let f = n / p;
            classgen_each(p, m / f, |block| {
                buf.clear();
                for _ in 0..f {
                    buf.extend_from_slice(block);
                }
                visit(m, p, &buf);
            });
        }
    }
}

pub fn build_sr(n: usize) -> SrSet {
    let mut entries = Vec::new();
    for_each_class(n, |_, period, runs| {
        let code = if runs.is_empty() {
            ClassCode::all_zeros(n)
        } else {
            ClassCode {
                runs: runs.to_vec(),
                n,
            }
        };
        entries.push(ClassEntry { code, period });
    });
    SrSet { n, entries }
}

/// Reference enumeration over all `2^n` strings, keeping the minimal
/// rotation of each class. Meant for cross-checking [`build_sr`].
pub fn brute_force_sr(n: usize) -> SrSet {
    assert!((1..=24).contains(&n), "brute force limited to n <= 24");
    let mask: u32 = (1u32 << n) - 1;
    let rotl = |x: u32| ((x << 1) | (x >> (n - 1))) & mask;
    let mut entries = Vec::new();
    for x in 0..=mask {
        // Bit n-1 is the first character, so numeric order is string order.
        let mut y = x;
        let mut canonical = true;
        let mut period = n;
        for k in 1..n {
            y = rotl(y);
            if y < x {
                canonical = false;
                break;
            }
            if y == x {
                period = k;
                break;
            }
        }
        if !canonical {
            continue;
        }
        let bits = (0..n).rev().map(|i| (x >> i) & 1 == 1).collect();
        let code = binary_to_code(&BitString(bits))
            .expect("minimal rotation of a necklace ends in 1 or is all zeros");
        entries.push(ClassEntry { code, period });
    }
    SrSet { n, entries }
}

fn binomial(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // Each prefix product C(n-k+i, i) is an integer.
    (1..=k as u128).fold(1u128, |acc, i| acc * (n as u128 - k as u128 + i) / i)
}

fn check_n(n: u32) {
    assert!(
        (1..=MAX_COUNT_N).contains(&n),
        "counting supports 1 <= n <= {MAX_COUNT_N}, got {n}"
    );
}

fn divisors_u32(n: u32) -> impl Iterator<Item = u32> {
    (1..=n).filter(move |d| n.is_multiple_of(*d))
}

/// Memoized class counts. One table per instance; create one per thread.
#[derive(Debug, Default)]
pub struct Counter {
    fp: HashMap<u32, u128>,
    fp_nm: HashMap<(u32, u32), u128>,
}

impl Counter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Full-period classes of `n`-bit strings.
    pub fn fp(&mut self, n: u32) -> u128 {
        check_n(n);
        if n == 1 {
            return 2;
        }
        if let Some(&v) = self.fp.get(&n) {
            return v;
        }
        let lower: u128 = divisors_u32(n)
            .filter(|&p| p < n)
            .map(|p| p as u128 * self.fp(p))
            .sum();
        let total = 1u128 << n;
        let v = (total - lower) / n as u128;
        self.fp.insert(n, v);
        v
    }

    /// All classes of `n`-bit strings, segregating the full-period term.
    pub fn n(&mut self, n: u32) -> u128 {
        check_n(n);
        if n == 1 {
            return 2;
        }
        let extra: u128 = divisors_u32(n)
            .filter(|&p| p < n)
            .map(|p| (n - p) as u128 * self.fp(p))
            .sum();
        ((1u128 << n) + extra) / n as u128
    }

    /// Full-period classes with `m` ones.
    pub fn fp_nm(&mut self, n: u32, m: u32) -> u128 {
        check_n(n);
        assert!(m <= n);
        if n == 1 {
            return 1;
        }
        if m == 0 || m == n {
            return 0;
        }
        if let Some(&v) = self.fp_nm.get(&(n, m)) {
            return v;
        }
        let g = gcd(n as usize, m as usize) as u32;
        let lower: u128 = divisors_u32(g)
            .filter(|&f| f > 1)
            .map(|f| (n / f) as u128 * self.fp_nm(n / f, m / f))
            .sum();
        let v = (binomial(n, m) - lower) / n as u128;
        self.fp_nm.insert((n, m), v);
        v
    }

    /// Classes with `m` ones, summed over admissible periods.
    pub fn n_nm(&mut self, n: u32, m: u32) -> u128 {
        check_n(n);
        assert!(m <= n);
        let g = gcd(n as usize, m as usize) as u32;
        divisors_u32(g).map(|f| self.fp_nm(n / f, m / f)).sum()
    }

    /// Same as [`Counter::n_nm`], segregating the `f = 1` term:
    /// `N_nm = C(n,m)/n + Σ_{f>1} (1 − 1/f)·FP_{n/f, m/f}`, scaled by `n`
    /// to stay in integers.
    pub fn n_nm_direct(&mut self, n: u32, m: u32) -> u128 {
        check_n(n);
        assert!(m <= n);
        if n == 1 {
            return 1;
        }
        let g = gcd(n as usize, m as usize) as u32;
        let extra: u128 = divisors_u32(g)
            .filter(|&f| f > 1)
            .map(|f| (n - n / f) as u128 * self.fp_nm(n / f, m / f))
            .sum();
        (binomial(n, m) + extra) / n as u128
    }

    /// Classes of period `p`.
    pub fn n_p(&mut self, n: u32, p: u32) -> u128 {
        check_n(n);
        if p == 0 || !n.is_multiple_of(p) {
            return 0;
        }
        self.fp(p)
    }

    /// Classes of period `p` with `m` ones.
    pub fn n_p_nm(&mut self, n: u32, m: u32, p: u32) -> u128 {
        check_n(n);
        assert!(m <= n);
        if p == 0 || !n.is_multiple_of(p) || !m.is_multiple_of(n / p) {
            return 0;
        }
        self.fp_nm(p, m * p / n)
    }
}

pub fn count_fp(n: u32) -> u128 {
    Counter::new().fp(n)
}

pub fn count_n(n: u32) -> u128 {
    Counter::new().n(n)
}

pub fn count_fp_nm(n: u32, m: u32) -> u128 {
    Counter::new().fp_nm(n, m)
}

pub fn count_n_nm(n: u32, m: u32) -> u128 {
    Counter::new().n_nm(n, m)
}

pub fn count_np(n: u32, p: u32) -> u128 {
    Counter::new().n_p(n, p)
}

pub fn count_np_nm(n: u32, m: u32, p: u32) -> u128 {
    Counter::new().n_p_nm(n, m, p)
}

pub fn binomial_coefficient(n: u32, k: u32) -> u128 {
    binomial(n, k)
}

/// Subboxes of the cube divided by subboxes actually solved: `2^n / N_n`.
pub fn ifdp(n: u32) -> f64 {
    let (num, den) = ifdp_ratio(n);
    num as f64 / den as f64
}

/// `(2^n, N_n)`, the exact ratio behind [`ifdp`].
pub fn ifdp_ratio(n: u32) -> (u128, u128) {
    (1u128 << n, count_n(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn code(runs: &[u32]) -> ClassCode {
        ClassCode::from_runs(runs.to_vec())
    }

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    // Exhaustive run chains of length m summing to total.
    fn all_chains(m: usize, total: u32) -> Vec<Vec<u32>> {
        if m == 1 {
            return vec![vec![total]];
        }
        let mut out = Vec::new();
        for first in (0..=total).rev() {
            for mut rest in all_chains(m - 1, total - first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    // Brute-force validity: strictly larger than every other rotation.
    fn brute_valid(runs: &[u32]) -> bool {
        let m = runs.len();
        (1..m).all(|k| {
            let mut r = runs.to_vec();
            r.rotate_left(k);
            runs > r.as_slice()
        })
    }

    #[test]
    fn decode_examples() {
        assert_eq!(code(&[1, 3, 1, 0, 0]).to_binary(), bits("0100010111"));
        assert_eq!(ClassCode::all_zeros(4).to_binary(), bits("0000"));
        let c = code(&[3, 0, 1]);
        assert_eq!(c.n(), 7);
        assert_eq!(c.to_binary(), bits("0001101"));
        assert_eq!(binary_to_code(&c.to_binary()).unwrap(), c);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            binary_to_code(&bits("0100010111")).unwrap().runs(),
            &[1, 3, 1, 0, 0]
        );
        assert_eq!(binary_to_code(&bits("001001")).unwrap().runs(), &[2, 2]);
        assert_eq!(binary_to_code(&bits("0110")), Err(CodeError::TrailingZero));
        assert!(binary_to_code(&bits("000")).unwrap().is_all_zeros());
    }

    #[test]
    fn with_len_checks_sum() {
        assert!(ClassCode::with_len(vec![3, 0, 1], 7).is_ok());
        assert!(ClassCode::with_len(vec![3, 0, 1], 8).is_err());
        assert!(ClassCode::with_len(vec![], 3).is_err());
    }

    #[test]
    fn periods() {
        assert_eq!(code(&[2, 2]).period(), 3);
        assert_eq!(bits("001001").period(), 3);
        assert_eq!(code(&[1, 3, 1, 0, 0]).period(), 10);
        assert_eq!(ClassCode::all_zeros(5).period(), 1);
        assert_eq!(code(&[0, 0, 0]).period(), 1);
        assert_eq!(code(&[1, 1]).period(), 2);
    }

    #[test]
    fn validity_examples() {
        assert!(code_validity(&code(&[3, 0, 1])));
        assert!(!code_validity(&code(&[2, 2])));
        assert!(!code_validity(&code(&[1, 3, 1, 0, 0])));
        assert!(brute_valid(&[3, 0, 1]));
        assert!(!brute_valid(&[1, 3, 1, 0, 0]));
        assert!(code_validity(&code(&[6, 0, 0])));
        assert!(code_validity(&code(&[4])));
        assert!(!code_validity(&ClassCode::all_zeros(3)));
        assert!(code_validity(&ClassCode::all_zeros(1)));
    }

    #[test]
    fn validity_matches_rotation_comparison() {
        for m in 2..=6 {
            for total in 0..=7 {
                for chain in all_chains(m, total) {
                    assert_eq!(
                        code_validity(&code(&chain)),
                        brute_valid(&chain),
                        "{chain:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn classgen_worked_example() {
        let got: Vec<String> = classgen(9, 3).iter().map(|c| c.to_string()).collect();
        assert_eq!(
            got,
            ["600", "510", "501", "420", "411", "402", "330", "321", "312"]
        );
    }

    #[test]
    fn classgen_edges() {
        assert_eq!(classgen(4, 2), vec![code(&[2, 0])]);
        assert!(classgen(4, 4).is_empty());
        assert_eq!(classgen(1, 1), vec![code(&[0])]);
        for n in 2..=16 {
            assert_eq!(classgen(n, 1), vec![code(&[(n - 1) as u32])]);
        }
    }

    #[test]
    fn classgen_equals_filtered_enumeration() {
        for n in 2..=14usize {
            for m in 1..=n {
                let expected: Vec<Vec<u32>> = all_chains(m, (n - m) as u32)
                    .into_iter()
                    .filter(|c| brute_valid(c))
                    .collect();
                let got: Vec<Vec<u32>> = classgen(n, m).into_iter().map(|c| c.runs).collect();
                assert_eq!(got, expected, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn lower_period_expansion() {
        let e = expand_lower_period(&[code(&[1])], 2);
        assert_eq!(e, vec![code(&[1, 1])]);
        assert_eq!(e[0].to_binary(), bits("0101"));
        assert_eq!(e[0].period(), 2);

        let ones = expand_lower_period(&[code(&[0])], 3);
        assert_eq!(ones[0].to_binary(), bits("111"));

        let e = expand_lower_period(&classgen(3, 1), 2);
        assert_eq!(e, vec![code(&[2, 2])]);
        assert_eq!(e[0].to_binary(), bits("001001"));
        assert_eq!(e[0].period(), 3);
    }

    #[test]
    fn small_sr_sets() {
        let sr2 = build_sr(2);
        let strings: Vec<String> = sr2
            .entries
            .iter()
            .map(|e| e.code.to_binary().to_string())
            .collect();
        assert_eq!(strings, ["00", "01", "11"]);
        let periods: Vec<usize> = sr2.entries.iter().map(|e| e.period).collect();
        assert_eq!(periods, [1, 2, 1]);
        assert_eq!(build_sr(5).len(), 8);
        assert_eq!(build_sr(7).len(), 20);
        assert_eq!(build_sr(1).len(), 2);
    }

    #[test]
    fn brute_force_small() {
        assert_eq!(brute_force_sr(2), build_sr(2));
        let sr3: Vec<String> = brute_force_sr(3)
            .entries
            .iter()
            .map(|e| e.code.to_binary().to_string())
            .collect();
        assert_eq!(sr3, ["000", "001", "011", "111"]);
        assert_eq!(brute_force_sr(12).len() as u128, count_n(12));
    }

    #[test]
    fn representatives_are_minimal_rotations() {
        for n in 1..=12 {
            for e in build_sr(n).entries {
                let b = e.code.to_binary();
                assert_eq!(b, b.min_rotation(), "n={n} code={}", e.code);
                assert_eq!(e.period, b.period());
            }
        }
    }

    #[test]
    fn counting_examples() {
        assert_eq!(count_fp(1), 2);
        assert_eq!(count_fp(2), 1);
        assert_eq!(count_fp(4), 3);
        assert_eq!(count_n(1), 2);
        assert_eq!(count_n(5), 8);
        assert_eq!(count_n(7), 20);
        assert_eq!(count_fp_nm(1, 0), 1);
        assert_eq!(count_fp_nm(1, 1), 1);
        assert_eq!(count_fp_nm(9, 3), 9);
        assert_eq!(count_fp_nm(4, 2), 1);
        assert_eq!(count_n_nm(4, 2), 2);
        assert_eq!(count_np(6, 3), count_fp(3));
        assert_eq!(count_np(6, 3), 2);
        assert_eq!(count_np(6, 4), 0);
        for n in 1..=16 {
            assert_eq!(count_n_nm(n, 0), 1);
        }
    }

    // Brute-force tallies straight from 2^n strings.
    fn brute_tallies(n: usize) -> (HashMap<usize, u128>, HashMap<(usize, usize), u128>) {
        let mut by_p = HashMap::new();
        let mut by_mp = HashMap::new();
        for e in brute_force_sr(n).entries {
            *by_p.entry(e.period).or_insert(0) += 1;
            *by_mp.entry((e.code.ones(), e.period)).or_insert(0) += 1;
        }
        (by_p, by_mp)
    }

    #[test]
    fn counts_match_brute_force() {
        let mut c = Counter::new();
        for n in 1..=14usize {
            let (by_p, by_mp) = brute_tallies(n);
            let nn = n as u32;
            assert_eq!(c.fp(nn), by_p.get(&n).copied().unwrap_or(0), "FP_{n}");
            let mut sum_p = 0;
            for p in 1..=n {
                let want = by_p.get(&p).copied().unwrap_or(0);
                assert_eq!(c.n_p(nn, p as u32), want, "N^{p}_{n}");
                sum_p += c.n_p(nn, p as u32);
            }
            assert_eq!(sum_p, c.n(nn));
            let mut sum_m = 0;
            for m in 0..=n {
                let mut row = 0;
                for p in 1..=n {
                    let want = by_mp.get(&(m, p)).copied().unwrap_or(0);
                    assert_eq!(c.n_p_nm(nn, m as u32, p as u32), want, "N^{p}_{n},{m}");
                    row += want;
                }
                let full = by_mp.get(&(m, n)).copied().unwrap_or(0);
                assert_eq!(c.fp_nm(nn, m as u32), full, "FP_{n},{m}");
                assert_eq!(c.n_nm(nn, m as u32), row, "N_{n},{m}");
                assert_eq!(c.n_nm_direct(nn, m as u32), row, "direct N_{n},{m}");
                sum_m += row;
            }
            assert_eq!(sum_m, c.n(nn));
        }
    }

    #[test]
    fn large_counts_fit() {
        let mut c = Counter::new();
        let n64 = c.n(64);
        assert!(n64 > 0);
        let total: u128 = (0..=64).map(|m| c.n_nm(64, m)).sum();
        assert_eq!(total, n64);
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn ifdp_values() {
        assert_eq!(ifdp(5), 4.0);
        assert!((ifdp(7) - 6.4).abs() < 1e-12);
        assert!((ifdp(4) - 16.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn code_display() {
        assert_eq!(code(&[1, 3, 1, 0, 0]).to_string(), "13100");
        assert_eq!(code(&[12, 0]).to_string(), "12 0");
        assert_eq!(ClassCode::all_zeros(3).to_string(), "-");
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(mut v in proptest::collection::vec(any::<bool>(), 1..40)) {
            *v.last_mut().unwrap() = true;
            let s = BitString::new(v);
            let c = binary_to_code(&s).unwrap();
            prop_assert_eq!(c.n(), s.len());
            prop_assert_eq!(code_to_binary(&c), s);
        }

        #[test]
        fn period_on_runs_matches_bits(v in proptest::collection::vec(any::<bool>(), 1..30)) {
            let s = BitString::new(v);
            if let Ok(c) = binary_to_code(&s) {
                prop_assert_eq!(c.period(), s.period());
            }
        }
    }
}
