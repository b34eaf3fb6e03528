//! Exact money arithmetic.
//!
//! Every cost, budget and price is a [`Rational`]. Path costs that may not
//! exist are carried as [`Cost`], where `Cost::Infinite` orders above every
//! finite value and absorbs addition.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::GameError;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"12"`, `"-3.25"`, `".5"` or `"7/3"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational, GameError> {
    let bad = || GameError::MalformedDocument(format!("not an exact decimal or fraction: {text:?}"));
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    let (negative, body) = match s.as_bytes()[0] {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (whole, frac) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(&digits).map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u8), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Canonical exact rendering: an integer, a terminating decimal, or `n/d`.
pub fn exact_string(value: &Rational) -> String {
    if value.is_integer() {
        return value.to_integer().to_string();
    }
    match terminating_decimal(value) {
        Some(s) => s,
        None => format!("{}/{}", value.numer(), value.denom()),
    }
}

fn terminating_decimal(value: &Rational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let mut twos = 0usize;
    let mut fives = 0usize;
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
    Some(decimal_string(value, twos.max(fives)))
}

/// Decimal rendering rounded half away from zero to `places` digits, with
/// trailing zeros trimmed.
pub fn decimal_string(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u8), places);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        return format!("{sign}{whole}");
    }
    let frac = format!("{:0>width$}", frac.to_string(), width = places);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// A path cost: finite, or `Infinite` when no qualifying path exists.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(Rational),
    Infinite,
}

impl Cost {
    pub fn zero() -> Self {
        Cost::Finite(Rational::zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Cost::Finite(r) => Some(r),
            Cost::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    /// `min(cap, self)` as a finite value.
    pub fn capped(&self, cap: &Rational) -> Rational {
        match self {
            Cost::Finite(r) if r < cap => r.clone(),
            _ => cap.clone(),
        }
    }
}

impl From<Rational> for Cost {
    fn from(r: Rational) -> Self {
        Cost::Finite(r)
    }
}

impl Add for &Cost {
    type Output = Cost;

    fn add(self, rhs: &Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl PartialEq<Rational> for Cost {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Cost::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for Cost {
    fn partial_cmp(&self, other: &Rational) -> Option<std::cmp::Ordering> {
        match self {
            Cost::Finite(r) => r.partial_cmp(other),
            Cost::Infinite => Some(std::cmp::Ordering::Greater),
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(r) => f.write_str(&exact_string(r)),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("34").unwrap(), int(34));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7/3").unwrap(), ratio(7, 3));
        assert_eq!(parse_rational(" 12. ").unwrap(), int(12));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "abc", "1e3", "1/0", "1.2.3", "-", ".", "0x10"] {
            assert!(parse_rational(s).is_err(), "{s:?} should not parse");
        }
    }

    #[test]
    fn renders_exact_strings() {
        assert_eq!(exact_string(&int(26)), "26");
        assert_eq!(exact_string(&ratio(51, 2)), "25.5");
        assert_eq!(exact_string(&ratio(-3, 8)), "-0.375");
        assert_eq!(exact_string(&ratio(1, 3)), "1/3");
    }

    #[test]
    fn rounds_decimal_rendering() {
        assert_eq!(decimal_string(&ratio(2, 3), 4), "0.6667");
        assert_eq!(decimal_string(&ratio(-1, 3), 2), "-0.33");
        assert_eq!(decimal_string(&ratio(1, 1000), 2), "0");
        assert_eq!(decimal_string(&int(8), 6), "8");
    }

    #[test]
    fn infinity_orders_above_and_absorbs() {
        assert!(Cost::Infinite > Cost::Finite(int(1_000_000)));
        assert_eq!(&Cost::Infinite + &Cost::zero(), Cost::Infinite);
        assert_eq!(&Cost::Finite(int(2)) + &Cost::Finite(int(3)), Cost::Finite(int(5)));
        assert_eq!(Cost::Infinite.capped(&int(34)), int(34));
        assert_eq!(Cost::Finite(int(12)).capped(&int(34)), int(12));
    }

    proptest::proptest! {
        #[test]
        fn exact_string_round_trips(n in -10_000i64..10_000, d in 1i64..2_000) {
            let r = ratio(n, d);
            proptest::prop_assert_eq!(parse_rational(&exact_string(&r)).unwrap(), r);
        }
    }
}
