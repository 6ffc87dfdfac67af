//! Exact rational arithmetic helpers and the "p/q" string form used in all
//! machine-readable output.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RatioParseError {
    #[error("malformed rational {0:?}, expected \"p/q\" or an integer")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Formats as "p/q" with q > 0, always including the denominator ("2/1").
pub fn format_ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_ratio(s: &str) -> Result<Rational, RatioParseError> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    let q: BigInt = q.trim().parse().map_err(|_| RatioParseError::Malformed(s.to_string()))?;
    if q.is_zero() {
        return Err(RatioParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back for extreme magnitudes.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY * r.numer().signum().to_f64().unwrap_or(1.0));
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// `base^exp` for a rational base and integer exponent.
pub fn pow_i64(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

/// `base^exp` if `exp` is an integer rational; `None` otherwise.
pub fn pow_rational(base: &Rational, exp: &Rational) -> Option<Rational> {
    if exp.denom().is_one() {
        exp.numer().to_i64().map(|e| pow_i64(base, e))
    } else {
        None
    }
}

/// Falling factorial n(n-1)...(n-k+1) as a rational.
pub fn falling(n: u64, k: u64) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n.saturating_sub(i));
    }
    Rational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_strings() {
        for s in ["2/1", "-5/3", "0/1", "7/2"] {
            let r = parse_ratio(s).unwrap();
            assert_eq!(format_ratio(&r), s);
        }
        assert_eq!(parse_ratio("4").unwrap(), int(4));
        assert_eq!(parse_ratio("6/4").unwrap(), ratio(3, 2));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("a/b").is_err());
    }

    #[test]
    fn powers_and_falling_factorials() {
        assert_eq!(pow_i64(&ratio(2, 3), 3), ratio(8, 27));
        assert_eq!(pow_i64(&ratio(2, 1), -2), ratio(1, 4));
        assert_eq!(pow_rational(&ratio(3, 10), &int(2)), Some(ratio(9, 100)));
        assert_eq!(pow_rational(&ratio(3, 10), &ratio(6, 5)), None);
        assert_eq!(falling(5, 3), int(60));
        assert_eq!(falling(3, 3), int(6));
    }
}
