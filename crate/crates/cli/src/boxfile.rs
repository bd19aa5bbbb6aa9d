//! Solution box files: one box per line, tab-separated
//! `lo_1 hi_1 … lo_n hi_n rep shift`. Plain solves write `-` in both
//! provenance columns.

use std::io::{self, BufRead, Write};

use symprune::{Interval, IntervalBox, Provenance, SolutionBox};
use thiserror::Error;

use crate::hexfloat::{format_hex, parse_hex};

#[derive(Debug, Error)]
pub enum BoxFileError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxLine {
    pub bounds: IntervalBox,
    pub provenance: Option<Provenance>,
}

fn endpoint(x: f64, hex: bool) -> String {
    if hex {
        format_hex(x)
    } else {
        // Shortest text that parses back to the same f64.
        format!("{x:?}")
    }
}

pub fn format_line(b: &IntervalBox, prov: Option<Provenance>, hex: bool) -> String {
    let mut cols: Vec<String> = Vec::with_capacity(2 * b.len() + 2);
    for d in b.dims() {
        cols.push(endpoint(d.lo(), hex));
        cols.push(endpoint(d.hi(), hex));
    }
    match prov {
        Some(p) => {
            cols.push(p.representative.to_string());
            cols.push(p.shift.to_string());
        }
        None => {
            cols.push("-".into());
            cols.push("-".into());
        }
    }
    cols.join("\t")
}

pub fn write_boxes<W: Write>(
    mut w: W,
    boxes: &[SolutionBox],
    with_provenance: bool,
    hex: bool,
) -> io::Result<()> {
    for b in boxes {
        let prov = with_provenance.then_some(b.provenance);
        writeln!(w, "{}", format_line(&b.bounds, prov, hex))?;
    }
    Ok(())
}

fn parse_endpoint(s: &str) -> Option<f64> {
    if s.contains("0x") || s.contains("0X") {
        parse_hex(s).ok()
    } else {
        s.parse().ok()
    }
}

pub fn parse_line(text: &str, line: usize) -> Result<BoxLine, BoxFileError> {
    let bad = |msg: String| BoxFileError::Malformed { line, msg };
    let cols: Vec<&str> = text.split('\t').collect();
    if cols.len() < 4 || !cols.len().is_multiple_of(2) {
        return Err(bad(format!("expected 2n+2 columns, got {}", cols.len())));
    }
    let (ends, prov) = cols.split_at(cols.len() - 2);
    let mut dims = Vec::with_capacity(ends.len() / 2);
    for pair in ends.chunks(2) {
        let lo = parse_endpoint(pair[0]).ok_or_else(|| bad(format!("bad number {:?}", pair[0])))?;
        let hi = parse_endpoint(pair[1]).ok_or_else(|| bad(format!("bad number {:?}", pair[1])))?;
        dims.push(Interval::new(lo, hi).map_err(|e| bad(e.to_string()))?);
    }
    let provenance = match (prov[0], prov[1]) {
        ("-", "-") => None,
        (r, s) => Some(Provenance {
            representative: r
                .parse()
                .map_err(|_| bad(format!("bad representative {r:?}")))?,
            shift: s.parse().map_err(|_| bad(format!("bad shift {s:?}")))?,
        }),
    };
    Ok(BoxLine {
        bounds: IntervalBox::new(dims),
        provenance,
    })
}

/// Reads every non-blank line; `#` starts a comment line.
pub fn read_boxes<R: BufRead>(r: R) -> Result<Vec<BoxLine>, BoxFileError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim_end();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(parse_line(t, i + 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> IntervalBox {
        IntervalBox::new(vec![
            Interval::new(0.1, 0.30000000000000004).unwrap(),
            Interval::new(-1e-300, 2.5).unwrap(),
        ])
    }

    #[test]
    fn decimal_and_hex_round_trip() {
        let p = Some(Provenance {
            representative: 3,
            shift: 4,
        });
        for hex in [false, true] {
            let text = format_line(&sample(), p, hex);
            let back = parse_line(&text, 1).unwrap();
            assert_eq!(back.bounds, sample());
            assert_eq!(back.provenance, p);
        }
        assert_eq!(
            format_line(&sample(), None, false),
            "0.1\t0.30000000000000004\t-1e-300\t2.5\t-\t-"
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_line("1\t2\t0", 1).is_err());
        assert!(parse_line("2\t1\t0\t0", 1).is_err());
        assert!(parse_line("a\t1\t0\t0", 1).is_err());
        let all = read_boxes("# header\n\n0\t1\t-\t-\n".as_bytes()).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].provenance, None);
    }
}
