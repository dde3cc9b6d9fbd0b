//! Exact rational scalars and value groups.
//!
//! Every coordinate in this crate is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms with positive denominator (the `num`
//! representation guarantees both). There is no floating point anywhere.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rat = BigRational;

/// `n/d` as a `Rat`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `Rat`.
pub fn rint(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p"` or `"p/q"` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num.trim()).map_err(|_| RatParseError::Malformed(s.to_string()))?;
    let d = BigInt::from_str(den.trim()).map_err(|_| RatParseError::Malformed(s.to_string()))?;
    if d.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// The value group Γ a constant may live in: all of ℚ, or the discrete
/// group ℤ·g for a fixed positive generator g.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueGroup {
    Full,
    Discrete { generator: Rat },
}

impl ValueGroup {
    pub fn full() -> Self {
        ValueGroup::Full
    }

    /// ℤ·g. Panics unless `g > 0`.
    pub fn discrete(g: Rat) -> Self {
        assert!(g.is_positive(), "value group generator must be positive");
        ValueGroup::Discrete { generator: g }
    }

    /// Exact membership test.
    pub fn contains(&self, x: &Rat) -> bool {
        match self {
            ValueGroup::Full => true,
            ValueGroup::Discrete { generator } => (x / generator).is_integer(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-3", "5/2", "-7/3"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s);
        }
        assert_eq!(parse_rat("4/2").unwrap(), rint(2));
        assert_eq!(format_rat(&parse_rat("4/2").unwrap()), "2");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/b").is_err());
    }

    #[test]
    fn discrete_membership() {
        let g = ValueGroup::discrete(rat(1, 2));
        assert!(g.contains(&rat(3, 2)));
        assert!(g.contains(&rint(0)));
        assert!(g.contains(&rat(-5, 2)));
        assert!(!g.contains(&rat(1, 3)));
        assert!(ValueGroup::full().contains(&rat(1, 3)));
    }
}
