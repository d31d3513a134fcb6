//! Exact rational scalars.
//!
//! All coefficient arithmetic in this crate is over ℚ with arbitrary
//! precision; nothing is ever rounded.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// `n/d` as an exact rational.  Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// ⌊q⌋ as an `i64` (floor toward −∞, so `floor(-1/2) == -1`).
pub fn floor_i64(q: &Rational) -> i64 {
    q.floor()
        .to_integer()
        .to_i64()
        .expect("floor out of i64 range")
}

/// True iff `q` is an integer.
pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// `q` as an `i64`, if it is an integer in range.
pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

/// Parse `p` or `p/q` (optional sign, decimal digits).  Returns `None` on
/// malformed input or a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::from(1),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Nonnegative residue of `k` modulo `r`.
pub fn modulo(k: i64, r: i64) -> i64 {
    debug_assert!(r > 0);
    k.rem_euclid(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_rounds_toward_minus_infinity() {
        assert_eq!(floor_i64(&rat(-1, 2)), -1);
        assert_eq!(floor_i64(&rat(1, 2)), 0);
        assert_eq!(floor_i64(&rat(-3, 1)), -3);
        assert_eq!(floor_i64(&rat(7, 3)), 2);
    }

    #[test]
    fn parses_and_reduces() {
        assert_eq!(parse_rational("4/6").unwrap(), rat(2, 3));
        assert_eq!(parse_rational("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rational(" 1/2 ").unwrap(), rat(1, 2));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("a/2").is_none());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(rat(2, 4).to_string(), "1/2");
        assert_eq!(rat(-6, 3).to_string(), "-2");
        assert_eq!(rat_int(0).to_string(), "0");
    }
}
