//! Exact rational values.
//!
//! `num`'s `BigRational` already keeps the invariants we need (positive
//! denominator, fully reduced after every operation), so this module only
//! adds construction and formatting helpers. All classical game values in
//! this crate are dyadic: the denominator divides `2^n` for the game's `n`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational from a signed numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `2^e` as a big integer.
pub fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

/// `1 / 2^e` as a rational.
pub fn one_over_pow2(e: u32) -> Rational {
    Rational::new(BigInt::one(), pow2(e))
}

/// Nearest `f64`, for reports only; exact comparisons stay rational.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().expect("rational fits in f64 range")
}

/// Decimal-free string form `p/q`, denominator always present.
pub fn format_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parse `p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational {s:?}, expected \"p/q\""));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}
