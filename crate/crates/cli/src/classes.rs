//! `classes gen` and `classes count`.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::Serialize;
use symprune::codes::{
    admissible_periods, classgen_each, count_fp, count_fp_nm, count_n_nm, count_np, divisors,
    for_each_class, ifdp_ratio, MAX_COUNT_N,
};
use symprune::ClassCode;

use crate::error::CliError;

pub const MAX_GEN_N: usize = 30;

fn gen_line(n: usize, period: usize, runs: &[u32]) -> String {
    let code = if runs.is_empty() {
        ClassCode::all_zeros(n)
    } else {
        ClassCode::from_runs(runs.to_vec())
    };
    format!("{code}\t{}\t{period}", code.to_binary())
}

/// Streams `runs<TAB>bits<TAB>period` lines. `m` restricts to classes with
/// `m` ones; `full_period` keeps only classes of period `n`.
pub fn generate<W: Write>(
    out: &mut W,
    n: usize,
    m: Option<usize>,
    full_period: bool,
) -> Result<u64, CliError> {
    if !(1..=MAX_GEN_N).contains(&n) {
        return Err(CliError::Usage(format!(
            "n must be in 1..={MAX_GEN_N}, got {n}"
        )));
    }
    if let Some(m) = m {
        if m > n {
            return Err(CliError::Usage(format!("m must be in 0..={n}, got {m}")));
        }
    }
    let mut count = 0u64;
    let mut result: io::Result<()> = Ok(());
    let mut emit = |period: usize, runs: &[u32]| {
        if result.is_ok() && (!full_period || period == n) {
            count += 1;
            result = writeln!(out, "{}", gen_line(n, period, runs));
        }
    };
    match m {
        None => for_each_class(n, |_, p, runs| emit(p, runs)),
        Some(0) => emit(1, &[]),
        Some(m) => {
            let mut buf = Vec::with_capacity(m);
            for p in admissible_periods(n, m) {
                if full_period && p != n {
                    continue;
                }
                let f = n / p;
                classgen_each(p, m / f, |block| {
                    buf.clear();
                    for _ in 0..f {
                        buf.extend_from_slice(block);
                    }
                    emit(p, &buf);
                });
            }
        }
    }
    result.map_err(|e| CliError::io("<output>", e))?;
    Ok(count)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodRow {
    pub period: u32,
    pub classes: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct PopcountRow {
    pub ones: u32,
    pub classes: u128,
    pub full_period: u128,
}

/// Counts for `n`-bit strings. `classes` is `N_n`, `full_period` is `FP_n`.
#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub n: u32,
    pub classes: u128,
    pub full_period: u128,
    pub subboxes: u128,
    pub ifdp: f64,
    pub per_period: Vec<PeriodRow>,
    pub per_popcount: Vec<PopcountRow>,
}

pub fn count(n: u32) -> Result<CountReport, CliError> {
    if !(1..=MAX_COUNT_N).contains(&n) {
        return Err(CliError::Usage(format!(
            "n must be in 1..={MAX_COUNT_N}, got {n}"
        )));
    }
    let (subboxes, classes) = ifdp_ratio(n);
    Ok(CountReport {
        n,
        classes,
        full_period: count_fp(n),
        subboxes,
        ifdp: subboxes as f64 / classes as f64,
        per_period: divisors(n as usize)
            .into_iter()
            .map(|p| PeriodRow {
                period: p as u32,
                classes: count_np(n, p as u32),
            })
            .collect(),
        per_popcount: (0..=n)
            .map(|m| PopcountRow {
                ones: m,
                classes: count_n_nm(n, m),
                full_period: count_fp_nm(n, m),
            })
            .collect(),
    })
}

impl CountReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "N = {}", self.classes);
        let _ = writeln!(s, "FP = {}", self.full_period);
        let _ = writeln!(s, "IFDP = {}", self.ifdp);
        let _ = writeln!(s, "IFDP_exact = {}/{}", self.subboxes, self.classes);
        let _ = writeln!(s, "# period\tclasses");
        for r in &self.per_period {
            let _ = writeln!(s, "{}\t{}", r.period, r.classes);
        }
        let _ = writeln!(s, "# ones\tclasses\tfull_period");
        for r in &self.per_popcount {
            let _ = writeln!(s, "{}\t{}\t{}", r.ones, r.classes, r.full_period);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use symprune::codes::count_n;

    fn gen(n: usize, m: Option<usize>, fp: bool) -> Vec<String> {
        let mut out = Vec::new();
        generate(&mut out, n, m, fp).unwrap();
        String::from_utf8(out)
            .unwrap()
            .lines()
            .map(String::from)
            .collect()
    }

    #[test]
    fn gen_with_popcount_includes_lower_periods() {
        assert_eq!(gen(4, Some(2), false), vec!["11\t0101\t2", "20\t0011\t4"]);
        assert_eq!(gen(4, Some(2), true), vec!["20\t0011\t4"]);
        assert_eq!(gen(3, Some(0), false), vec!["-\t000\t1"]);
        assert_eq!(gen(1, None, true).len(), 2);
        assert_eq!(gen(6, None, false).len() as u128, count_n(6));
        assert_eq!(gen(6, None, true).len() as u128, count_fp(6));
    }

    #[test]
    fn bad_arguments() {
        let mut sink = Vec::new();
        assert!(generate(&mut sink, 0, None, false).is_err());
        assert!(generate(&mut sink, 31, None, false).is_err());
        assert!(generate(&mut sink, 4, Some(5), false).is_err());
        assert!(count(0).is_err());
        assert!(count(65).is_err());
    }

    #[test]
    fn count_tables_add_up() {
        let r = count(12).unwrap();
        assert_eq!(
            r.per_period.iter().map(|x| x.classes).sum::<u128>(),
            r.classes
        );
        assert_eq!(
            r.per_popcount.iter().map(|x| x.classes).sum::<u128>(),
            r.classes
        );
        assert_eq!(
            r.per_popcount.iter().map(|x| x.full_period).sum::<u128>(),
            r.full_period
        );
        let r = count(64).unwrap();
        assert_eq!(r.subboxes, 1u128 << 64);
    }
}
