//! Half-integer spin labels, stored as twice their value.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A half-integer (spin or weight label), stored exactly as `2*value`.
///
/// Used both for representation weights `j` (non-negative) and magnetic
/// labels `m` (any sign). Fractions are rendered and parsed as `p/2`
/// ("3/2"), never as decimals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    /// Construct from twice the value.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt(twice)
    }

    /// Construct from an integer value.
    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    /// Twice the value, always an integer.
    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// The integer value; panics if this is a proper half-integer.
    pub fn as_int(self) -> i64 {
        assert!(self.is_integer(), "{self} is not an integer");
        self.0 / 2
    }

    pub fn as_rational(self) -> Rational {
        Rational::new(self.0.into(), 2.into())
    }

    /// `2j+1`, the dimension of the weight-j representation.
    pub fn dim(self) -> usize {
        assert!(self.0 >= 0, "negative weight {self}");
        (self.0 + 1) as usize
    }

    /// Whether `m` is a valid magnetic label for weight `self`:
    /// `|m| <= j` and `j - m` integral.
    pub fn contains(self, m: HalfInt) -> bool {
        m.0.abs() <= self.0 && (self.0 - m.0) % 2 == 0
    }

    /// Inclusive range `lo..=hi` in half-integer steps.
    pub fn half_steps(lo: HalfInt, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        (lo.0..=hi.0).map(HalfInt)
    }

    /// Magnetic labels of weight `self`, descending from `j` to `-j`.
    pub fn magnetics_desc(self) -> impl DoubleEndedIterator<Item = HalfInt> {
        let j = self.0;
        (0..=j.max(0)).map(move |k| HalfInt(j - 2 * k))
    }

    /// Triangle range `|a-b| ..= a+b` of admissible couplings, ascending.
    pub fn couplings(a: HalfInt, b: HalfInt) -> impl DoubleEndedIterator<Item = HalfInt> {
        let lo = (a.0 - b.0).abs();
        let hi = a.0 + b.0;
        (0..=(hi - lo) / 2).map(move |k| HalfInt(lo + 2 * k))
    }

    /// Triangle condition: `|a-b| <= c <= a+b` with integral perimeter.
    pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
        c.0 >= (a.0 - b.0).abs() && c.0 <= a.0 + b.0 && (a.0 + b.0 + c.0) % 2 == 0
    }

    /// `(-1)^self`; errors make no sense here, half-odd exponents panic.
    pub fn parity_sign(self) -> i64 {
        assert!(self.is_integer(), "(-1)^{self} is not a sign");
        if (self.0 / 2) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Parse "2", "-1/2", "3/2". Decimal notation is rejected.
    pub fn parse(s: &str) -> Result<HalfInt> {
        let bad = || Error::BadLabel(s.to_string());
        let s = s.trim();
        if s.contains('.') {
            return Err(bad());
        }
        if let Some((num, den)) = s.split_once('/') {
            if den.trim() != "2" {
                // only halves: anything else (thirds, ...) is not a spin label
                let n: i64 = num.trim().parse().map_err(|_| bad())?;
                let d: i64 = den.trim().parse().map_err(|_| bad())?;
                if d == 1 {
                    return Ok(HalfInt::from_int(n));
                }
                return Err(bad());
            }
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            Ok(HalfInt(n))
        } else {
            let n: i64 = s.parse().map_err(|_| bad())?;
            Ok(HalfInt::from_int(n))
        }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!(HalfInt::parse("3/2").unwrap().twice(), 3);
        assert_eq!(HalfInt::parse("-1/2").unwrap().twice(), -1);
        assert_eq!(HalfInt::parse("2").unwrap().twice(), 4);
        assert!(HalfInt::parse("0.5").is_err());
        assert!(HalfInt::parse("1/3").is_err());
        assert_eq!(HalfInt::from_twice(5).to_string(), "5/2");
        assert_eq!(HalfInt::from_twice(-4).to_string(), "-2");
    }

    #[test]
    fn magnetics_and_couplings() {
        let j = HalfInt::parse("3/2").unwrap();
        let ms: Vec<i64> = j.magnetics_desc().map(|m| m.twice()).collect();
        assert_eq!(ms, vec![3, 1, -1, -3]);
        let cs: Vec<i64> = HalfInt::couplings(HalfInt::from_int(1), j).map(|c| c.twice()).collect();
        assert_eq!(cs, vec![1, 3, 5]);
        assert!(HalfInt::triangle(j, j, HalfInt::from_int(3)));
        assert!(!HalfInt::triangle(j, j, HalfInt::from_twice(5)));
    }
}
