//! Exact nonnegative rational parameters (ε and friends) and exact floors of
//! rational powers.
//!
//! Thresholds like `|S| ≤ εm` or `⌊m^c / ε⌋` sit on integer boundaries often
//! enough in tests that floating point comparisons are not acceptable, so every
//! such comparison goes through [`Fraction`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest bit length we are willing to materialize for an exact power check.
const EXACT_POWER_BIT_CAP: f64 = (1u64 << 26) as f64;

/// A nonnegative rational number `num/den` in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Fraction(Ratio<u64>);

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::param("zero denominator"));
        }
        Ok(Fraction(Ratio::new(num, den)))
    }

    pub fn integer(value: u64) -> Self {
        Fraction(Ratio::from_integer(value))
    }

    pub fn zero() -> Self {
        Fraction::integer(0)
    }

    pub fn one() -> Self {
        Fraction::integer(1)
    }

    /// Converts through the shortest decimal representation of `value`, so
    /// `0.1` becomes exactly `1/10`.
    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::param(format!("{value} is not a nonnegative number")));
        }
        format!("{value}").parse()
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer()), BigInt::from(self.denom()))
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// `true` iff `0 < self < 1`.
    pub fn is_open_unit(&self) -> bool {
        self.numer() > 0 && self.numer() < self.denom()
    }

    /// `count ≤ self · total`, evaluated exactly.
    pub fn bounds(&self, count: u64, total: u64) -> bool {
        (count as u128) * (self.denom() as u128) <= (self.numer() as u128) * (total as u128)
    }

    /// `count ≥ self · total`, evaluated exactly.
    pub fn reached_by(&self, count: u64, total: u64) -> bool {
        (count as u128) * (self.denom() as u128) >= (self.numer() as u128) * (total as u128)
    }

    /// `⌊self · total⌋`.
    pub fn floor_times(&self, total: u64) -> u64 {
        ((self.numer() as u128 * total as u128) / self.denom() as u128) as u64
    }

    pub fn checked_mul(&self, other: &Fraction) -> Option<Fraction> {
        let num = self.numer().checked_mul(other.numer())?;
        let den = self.denom().checked_mul(other.denom())?;
        Some(Fraction(Ratio::new(num, den)))
    }

    pub fn cube(&self) -> Option<Fraction> {
        self.checked_mul(self)?.checked_mul(self)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fraction({self})")
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `p/q`, integers, and plain decimals such as `0.125`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::param(format!("cannot parse {s:?} as a nonnegative rational"));
        if let Some((p, q)) = s.split_once('/') {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let q: u64 = q.trim().parse().map_err(|_| bad())?;
            return Fraction::new(p, q);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
            || frac_part.len() > 18
        {
            return Err(bad());
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int_val: u64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let frac_val: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = int_val.checked_mul(den).and_then(|v| v.checked_add(frac_val)).ok_or_else(bad)?;
        Fraction::new(num, den)
    }
}

impl TryFrom<String> for Fraction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Fraction> for String {
    fn from(f: Fraction) -> String {
        f.to_string()
    }
}

/// Compares `value` against `base^exponent` exactly (up to a size cap beyond
/// which the float comparison is trusted).
pub fn cmp_with_power(value: u64, base: u64, exponent: Fraction) -> Ordering {
    scaled_cmp(value, base, exponent, Fraction::one())
}

/// `⌊base^exponent⌋`.
pub fn floor_power(base: u64, exponent: Fraction) -> u64 {
    floor_scaled_power(base, exponent, Fraction::one())
}

/// `⌊scale · base^exponent⌋`.
pub fn floor_scaled_power(base: u64, exponent: Fraction, scale: Fraction) -> u64 {
    assert!(base >= 1, "base must be positive");
    let estimate = scale.to_f64() * (base as f64).powf(exponent.to_f64());
    let mut x = if estimate.is_finite() && estimate < 1.8e19 { estimate.floor() as u64 } else { u64::MAX };
    // The float estimate is off by at most a unit or two; walk to the exact floor.
    while x > 0 && scaled_cmp(x, base, exponent, scale) == Ordering::Greater {
        x -= 1;
    }
    while x < u64::MAX && scaled_cmp(x + 1, base, exponent, scale) != Ordering::Greater {
        x += 1;
    }
    x
}

/// Compares `value` with `scale · base^exponent`, with `exponent = p/q` and
/// `scale = a/b`, via `(value·b)^q` versus `a^q · base^p`.
fn scaled_cmp(value: u64, base: u64, exponent: Fraction, scale: Fraction) -> Ordering {
    let (p, q) = (exponent.numer(), exponent.denom());
    let (a, b) = (scale.numer(), scale.denom());
    let lhs_log = (value as f64).log2() + (b as f64).log2();
    let rhs_log = (a as f64).log2() + (p as f64 / q as f64) * (base as f64).log2();
    if value == 0 {
        return if a == 0 { Ordering::Equal } else { Ordering::Less };
    }
    if a == 0 {
        return Ordering::Greater;
    }
    if (lhs_log - rhs_log).abs() > 1e-9 {
        return lhs_log.partial_cmp(&rhs_log).unwrap_or(Ordering::Equal);
    }
    let bits = q as f64 * lhs_log.max((a as f64).log2() + 1.0) + p as f64 * (base as f64).log2();
    if bits > EXACT_POWER_BIT_CAP || q > u32::MAX as u64 || p > u32::MAX as u64 {
        return lhs_log.partial_cmp(&rhs_log).unwrap_or(Ordering::Equal);
    }
    let lhs = BigUint::from(value as u128 * b as u128).pow(q as u32);
    let rhs = BigUint::from(a).pow(q as u32) * BigUint::from(base).pow(p as u32);
    lhs.cmp(&rhs)
}

/// Exact `BigRational` from a numerator over a common denominator.
pub(crate) fn big_ratio(num: u128, den: u128) -> BigRational {
    if den.is_one() {
        return BigRational::from_integer(BigInt::from(num));
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Decimal rendering used in reports.
pub fn big_to_f64(value: &BigRational) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!("0.1".parse::<Fraction>().unwrap(), Fraction::new(1, 10).unwrap());
        assert_eq!("0.125".parse::<Fraction>().unwrap(), Fraction::new(1, 8).unwrap());
        assert_eq!("3/6".parse::<Fraction>().unwrap(), Fraction::new(1, 2).unwrap());
        assert_eq!("2".parse::<Fraction>().unwrap(), Fraction::integer(2));
        assert_eq!(".5".parse::<Fraction>().unwrap(), Fraction::new(1, 2).unwrap());
        assert!("-0.1".parse::<Fraction>().is_err());
        assert!("abc".parse::<Fraction>().is_err());
        assert!("1/0".parse::<Fraction>().is_err());
        assert_eq!(Fraction::from_f64(0.2).unwrap(), Fraction::new(1, 5).unwrap());
    }

    #[test]
    fn boundary_comparisons() {
        let eps = Fraction::new(1, 4).unwrap();
        assert!(eps.bounds(1, 4));
        assert!(!eps.bounds(2, 4));
        assert!(eps.reached_by(1, 4));
        assert!(!eps.reached_by(0, 4));
    }

    #[test]
    fn exact_floors_on_integer_boundaries() {
        // 256^(1/8) = 2 exactly, the float route lands on 1.999...
        assert_eq!(floor_power(256, Fraction::new(1, 8).unwrap()), 2);
        assert_eq!(floor_power(1024, Fraction::new(1, 8).unwrap()), 2);
        assert_eq!(floor_power(1000, Fraction::new(1, 3).unwrap()), 10);
        assert_eq!(floor_power(999, Fraction::new(1, 3).unwrap()), 9);
        assert_eq!(floor_power(17, Fraction::zero()), 1);
        // ⌊10^(0.1·3·... )⌋ style: ⌊ (1000^(1/10)) / (1/10) ⌋ = ⌊19.95⌋
        let s = floor_scaled_power(1000, Fraction::new(1, 10).unwrap(), Fraction::integer(10));
        assert_eq!(s, 19);
        assert_eq!(floor_scaled_power(100, Fraction::new(1, 2).unwrap(), Fraction::integer(5)), 50);
    }

    #[test]
    fn power_comparison() {
        let half = Fraction::new(1, 2).unwrap();
        assert_eq!(cmp_with_power(10, 100, half), Ordering::Equal);
        assert_eq!(cmp_with_power(9, 100, half), Ordering::Less);
        assert_eq!(cmp_with_power(11, 100, half), Ordering::Greater);
    }
}
