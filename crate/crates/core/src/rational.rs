//! Exact rational numbers and their text literals.
//!
//! Every payoff, probability, discount factor and threshold in this crate is a
//! [`Rational`]. The literal grammar accepted by [`parse_rational`] is
//!
//! ```text
//! literal  := sign? ( integer "/" integer | integer ( "." digits )? | "." digits )
//! ```
//!
//! Decimal literals are converted exactly (`"5.5"` is `11/2`), never through a float.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary precision rational, always normalized with a positive denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {literal:?}: {reason}")]
pub struct ParseRationalError {
    pub literal: String,
    pub reason: &'static str,
}

/// Integer-valued rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `numer / denom`, normalized. Panics when `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        literal: text.to_string(),
        reason,
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty literal"));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    if body.is_empty() {
        return Err(err("missing digits"));
    }

    let value = if let Some((num, den)) = body.split_once('/') {
        let num = parse_digits(num).ok_or_else(|| err("numerator is not an unsigned integer"))?;
        let den = parse_digits(den).ok_or_else(|| err("denominator is not an unsigned integer"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        Rational::new(num, den)
    } else if let Some((whole, frac)) = body.split_once('.') {
        if whole.is_empty() && frac.is_empty() {
            return Err(err("missing digits"));
        }
        let whole = if whole.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(whole).ok_or_else(|| err("malformed decimal"))?
        };
        let frac_value = if frac.is_empty() {
            BigInt::zero()
        } else {
            parse_digits(frac).ok_or_else(|| err("malformed decimal"))?
        };
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        Rational::new(whole * &scale + frac_value, scale)
    } else {
        Rational::from_integer(parse_digits(body).ok_or_else(|| err("not a number"))?)
    };
    Ok(if negative { -value } else { value })
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical machine literal: `"p"` for integers, `"p/q"` otherwise.
pub fn to_literal(value: &Rational) -> String {
    value.to_string()
}

/// Exact decimal expansion when the denominator has no prime factors other
/// than 2 and 5.
pub fn to_exact_decimal(value: &Rational) -> Option<String> {
    if value.is_integer() {
        return Some(value.numer().to_string());
    }
    let mut den = value.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_multiple_of(&two) {
        den /= &two;
        twos += 1;
    }
    while den.is_multiple_of(&five) {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = value * Rational::from_integer(num_traits::pow(BigInt::from(10u32), digits));
    debug_assert!(scaled.is_integer());
    let magnitude = scaled.numer().abs().to_string();
    let padded = format!("{magnitude:0>width$}", width = digits + 1);
    let (whole, frac) = padded.split_at(padded.len() - digits);
    let sign = if value.is_negative() { "-" } else { "" };
    Some(format!("{sign}{whole}.{frac}"))
}

/// Human rendering: exact decimals where possible, `p/q` otherwise.
pub struct Human<'a>(pub &'a Rational);

impl fmt::Display for Human<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match to_exact_decimal(self.0) {
            Some(d) => f.pad(&d),
            None => f.pad(&to_literal(self.0)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("5.5").unwrap(), ratio(11, 2));
        assert_eq!(parse_rational("-0.5").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational("11/5").unwrap(), ratio(11, 5));
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("15000").unwrap(), int(15000));
        assert_eq!(parse_rational(" +3 ").unwrap(), int(3));
        assert_eq!(parse_rational(".25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", "1/0", "a", "1.2.3", "1/-2", "1e3", "./", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn literal_is_canonical() {
        assert_eq!(to_literal(&ratio(22, 10)), "11/5");
        assert_eq!(to_literal(&ratio(-4, 2)), "-2");
        assert_eq!(to_literal(&int(0)), "0");
    }

    #[test]
    fn exact_decimals_only_when_terminating() {
        assert_eq!(to_exact_decimal(&ratio(11, 2)).as_deref(), Some("5.5"));
        assert_eq!(to_exact_decimal(&ratio(-1, 2)).as_deref(), Some("-0.5"));
        assert_eq!(to_exact_decimal(&ratio(1, 40)).as_deref(), Some("0.025"));
        assert_eq!(to_exact_decimal(&ratio(-3, 1)).as_deref(), Some("-3"));
        assert_eq!(to_exact_decimal(&ratio(1, 3)), None);
        assert_eq!(Human(&ratio(2, 5)).to_string(), "0.4");
        assert_eq!(Human(&ratio(3, 13)).to_string(), "3/13");
    }
}
