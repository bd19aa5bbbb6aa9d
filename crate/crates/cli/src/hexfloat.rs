//! C99-style hexadecimal float text, e.g. `0x1.8p+1` for 3.0.
//! Bit-exact in both directions.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a hex float: {0:?}")]
pub struct HexFloatError(pub String);

const FRAC_BITS: u32 = 52;
const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;

pub fn format_hex(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> FRAC_BITS) & 0x7ff) as i32;
    let frac = bits & FRAC_MASK;
    if biased == 0 && frac == 0 {
        return format!("{sign}0x0p+0");
    }
    let (lead, exp) = if biased == 0 {
        (0, -1022)
    } else {
        (1, biased - 1023)
    };
    let mut digits = format!("{frac:013x}");
    while digits.ends_with('0') {
        digits.pop();
    }
    let dot = if digits.is_empty() { "" } else { "." };
    let esign = if exp >= 0 { "+" } else { "" };
    format!("{sign}0x{lead}{dot}{digits}p{esign}{exp}")
}

/// Parses the output of [`format_hex`]. The leading digit must be 0 or 1
/// and at most 13 fraction digits are allowed, so every accepted string
/// denotes an exactly representable value.
pub fn parse_hex(s: &str) -> Result<f64, HexFloatError> {
    let err = || HexFloatError(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let signed = |v: f64| if neg { -v } else { v };
    match body {
        "inf" => return Ok(signed(f64::INFINITY)),
        "nan" => return Ok(f64::NAN),
        _ => {}
    }
    let body = body
        .strip_prefix("0x")
        .or_else(|| body.strip_prefix("0X"))
        .ok_or_else(err)?;
    let (mant, exp) = body.split_once(['p', 'P']).ok_or_else(err)?;
    let exp: i32 = exp.parse().map_err(|_| err())?;
    let (lead, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.len() > 13 || !frac.chars().all(|c| c.is_ascii_hexdigit()) {
        return Err(err());
    }
    let lead: u64 = match lead {
        "0" => 0,
        "1" => 1,
        _ => return Err(err()),
    };
    let frac = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).map_err(|_| err())? << (4 * (13 - frac.len()))
    };
    let bits = match (lead, frac) {
        (0, 0) => 0,
        (0, f) if exp == -1022 => f,
        (1, f) if (-1022..=1023).contains(&exp) => (((exp + 1023) as u64) << FRAC_BITS) | f,
        _ => return Err(err()),
    };
    Ok(signed(f64::from_bits(bits)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        assert_eq!(format_hex(3.0), "0x1.8p+1");
        assert_eq!(format_hex(1.0), "0x1p+0");
        assert_eq!(format_hex(-0.5), "-0x1p-1");
        assert_eq!(format_hex(0.1), "0x1.999999999999ap-4");
        assert_eq!(format_hex(-0.0), "-0x0p+0");
        assert_eq!(format_hex(f64::MIN_POSITIVE / 2.0), "0x0.8p-1022");
        assert_eq!(parse_hex("0x1.8p+1").unwrap(), 3.0);
        assert_eq!(parse_hex("-inf").unwrap(), f64::NEG_INFINITY);
        assert!(parse_hex("0x2p+0").is_err());
        assert!(parse_hex("1.5").is_err());
        assert!(parse_hex("0x1p+1024").is_err());
    }

    proptest! {
        #[test]
        fn round_trips_bit_exactly(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            prop_assert_eq!(parse_hex(&format_hex(x)).unwrap().to_bits(), bits);
        }
    }
}
