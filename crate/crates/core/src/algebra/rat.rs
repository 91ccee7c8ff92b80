//! Arbitrary-precision rationals.
//!
//! `Rat` is `num_rational::BigRational`, which already keeps the canonical
//! form we rely on everywhere: numerator and denominator coprime, denominator
//! positive, zero stored as 0/1. The helpers here cover construction and the
//! exact string format used by the CLI ("±num/den", denominator omitted when
//! it is 1).

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub type Rat = num_rational::BigRational;

/// Rational from an integer pair; panics on zero denominator.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Rational from an integer.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses "±num/den" (den omitted when 1). Rejects zero denominators and
/// anything that is not a plain decimal integer pair.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::MalformedRational(s.to_string());
    let s = s.trim();
    // Unicode minus shows up in hand-written fixtures.
    let s = s.replace('\u{2212}', "-");
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s.as_str(), None),
    };
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    let den: BigInt = match den_str {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rat::new(num, den))
}

/// Exact string form: "num/den", or just "num" for integers.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["-3/7", "3", "0", "12/5", "-1"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_normalizes() {
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rat("3/-6").unwrap(), rat(-1, 2));
        assert_eq!(format_rat(&parse_rat("0/5").unwrap()), "0");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(parse_rat("3/0"), Err(Error::MalformedRational(_))));
        assert!(parse_rat("a/2").is_err());
        assert!(parse_rat("1.5").is_err());
    }
}
