//! The square-root extension field: finite rational combinations of square
//! roots of square-free positive integers.
//!
//! A value is `sum_s c_s * sqrt(s)` with every radicand `s` square-free and
//! `>= 1`; radicand 1 holds the rational part. Products reduce radicands
//! exactly: `sqrt(s)*sqrt(t) = g*sqrt(st/g^2)` with `g = gcd(s,t)`, which
//! keeps radicands square-free without any factoring. This is where all
//! Clebsch-Gordan values, normalizations and twist coefficients live.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::rational::{
    parse_rational, rat_int, render_rational, squarefree_decompose, Rational, SqrtRatio,
};

/// Exact element of the square-root extension of the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SqrtExt {
    terms: BTreeMap<i64, Rational>,
}

impl SqrtExt {
    pub fn zero() -> Self {
        SqrtExt { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        SqrtExt::from_int(1)
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(1, r);
        }
        SqrtExt { terms }
    }

    pub fn from_int(n: i64) -> Self {
        SqrtExt::from_rational(rat_int(n))
    }

    /// `coeff * sqrt(radicand)`; the radicand is reduced to square-free form.
    pub fn sqrt_term(coeff: Rational, radicand: i64) -> Result<Self> {
        let (root, squarefree) = squarefree_decompose(radicand as i128)?;
        let c = coeff * Rational::from_integer(num_bigint::BigInt::from(root));
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(squarefree as i64, c);
        }
        Ok(SqrtExt { terms })
    }

    /// Principal square root of a non-negative rational: `sqrt(p/q)` stored
    /// as `sqrt(pq)/q`.
    pub fn sqrt_rational(r: &Rational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::Parse(format!(
                "square root of negative rational {}",
                render_rational(r)
            )));
        }
        if r.is_zero() {
            return Ok(SqrtExt::zero());
        }
        let (root, sf) = SqrtRatio::one().rat(r, 1).sqrt_parts()?;
        SqrtExt::sqrt_term(root, sf)
    }

    /// Exact square root of a factorial quotient assembled in `SqrtRatio`.
    pub fn sqrt_of(ratio: &SqrtRatio) -> Result<Self> {
        let (root, sf) = ratio.sqrt_parts()?;
        SqrtExt::sqrt_term(root, sf)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&1).map(|c| c.is_one()).unwrap_or(false)
    }

    /// True if the value lies in the rationals.
    pub fn is_rational(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&1))
    }

    /// The rational part (coefficient of radicand 1).
    pub fn rational_part(&self) -> Rational {
        self.terms.get(&1).cloned().unwrap_or_else(Rational::zero)
    }

    /// The rational value, if the element is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.is_rational() {
            Some(self.rational_part())
        } else {
            None
        }
    }

    /// The single `(radicand, coeff)` pair, if the element has one term.
    pub fn as_single_term(&self) -> Option<(i64, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(&s, c)| (s, c))
        } else {
            None
        }
    }

    /// Iterate `(radicand, coefficient)` pairs, radicands ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return SqrtExt::zero();
        }
        SqrtExt { terms: self.terms.iter().map(|(&s, c)| (s, c * r)).collect() }
    }

    fn insert_term(terms: &mut BTreeMap<i64, Rational>, radicand: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(radicand) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Multiplicative inverse. Only single-term values `r*sqrt(s)` are
    /// invertible here; no in-scope formula divides by a multi-term value.
    pub fn inverse(&self) -> Result<Self> {
        match self.terms.len() {
            0 => Err(Error::DivisionByZero),
            1 => {
                let (&s, c) = self.terms.iter().next().unwrap();
                // 1/(c sqrt(s)) = sqrt(s)/(c s)
                let coeff = (c * rat_int(s)).recip();
                let mut terms = BTreeMap::new();
                terms.insert(s, coeff);
                Ok(SqrtExt { terms })
            }
            _ => Err(Error::MultiTermDivision(self.to_string())),
        }
    }

    /// Divide by a single-term value.
    pub fn div(&self, other: &SqrtExt) -> Result<Self> {
        Ok(self.clone() * other.inverse()?)
    }

    /// Principal square root, when it exists in the field: the value must be
    /// a non-negative rational (a single-term square is always rational, so
    /// nothing else has a representable square root).
    pub fn sqrt(&self) -> Result<Self> {
        match self.as_rational() {
            Some(r) => SqrtExt::sqrt_rational(&r),
            None => Err(Error::NoSeriesSqrt(format!(
                "sqrt of non-rational value {self} is not representable"
            ))),
        }
    }

    /// Sign of a single-term or rational value; multi-term values have a
    /// well-defined sign too but we never need it.
    pub fn single_term_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        self.as_single_term().map(|(_, c)| if c.is_negative() { -1 } else { 1 })
    }

    /// Parse the canonical rendering produced by `Display`.
    pub fn parse(input: &str) -> Result<Self> {
        let s = input.trim();
        if s == "0" {
            return Ok(SqrtExt::zero());
        }
        let mut out = SqrtExt::zero();
        // split on top-level " + " / " - "
        let mut rest = s;
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix("-") {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
                (Some(a), Some(b)) if a < b => (&rest[..a], Some((1, &rest[a + 3..]))),
                (Some(_), Some(b)) => (&rest[..b], Some((-1, &rest[b + 3..]))),
                (Some(a), None) => (&rest[..a], Some((1, &rest[a + 3..]))),
                (None, Some(b)) => (&rest[..b], Some((-1, &rest[b + 3..]))),
                (None, None) => (rest, None),
            };
            let parsed = Self::parse_term(term)?;
            out += parsed.scale(&rat_int(sign));
            match next {
                Some((sg, r)) => {
                    sign = sg;
                    rest = r;
                }
                None => break,
            }
        }
        Ok(out)
    }

    fn parse_term(term: &str) -> Result<Self> {
        let term = term.trim();
        let bad = || Error::Parse(format!("bad sqrt-extension term {term:?}"));
        if let Some(idx) = term.find("sqrt(") {
            let inner = &term[idx + 5..];
            let close = inner.find(')').ok_or_else(bad)?;
            let radicand: i64 = inner[..close].trim().parse().map_err(|_| bad())?;
            let coeff_str = term[..idx].trim().trim_end_matches('*').trim();
            let coeff = if coeff_str.is_empty() { Rational::one() } else { parse_rational(coeff_str)? };
            SqrtExt::sqrt_term(coeff, radicand)
        } else {
            Ok(SqrtExt::from_rational(parse_rational(term)?))
        }
    }
}

impl From<i64> for SqrtExt {
    fn from(n: i64) -> Self {
        SqrtExt::from_int(n)
    }
}

impl From<Rational> for SqrtExt {
    fn from(r: Rational) -> Self {
        SqrtExt::from_rational(r)
    }
}

impl Add for SqrtExt {
    type Output = SqrtExt;
    fn add(mut self, rhs: SqrtExt) -> SqrtExt {
        self += rhs;
        self
    }
}

impl AddAssign for SqrtExt {
    fn add_assign(&mut self, rhs: SqrtExt) {
        for (s, c) in rhs.terms {
            Self::insert_term(&mut self.terms, s, c);
        }
    }
}

impl<'a> AddAssign<&'a SqrtExt> for SqrtExt {
    fn add_assign(&mut self, rhs: &'a SqrtExt) {
        for (&s, c) in &rhs.terms {
            Self::insert_term(&mut self.terms, s, c.clone());
        }
    }
}

impl Sub for SqrtExt {
    type Output = SqrtExt;
    fn sub(mut self, rhs: SqrtExt) -> SqrtExt {
        self -= rhs;
        self
    }
}

impl SubAssign for SqrtExt {
    fn sub_assign(&mut self, rhs: SqrtExt) {
        for (s, c) in rhs.terms {
            Self::insert_term(&mut self.terms, s, -c);
        }
    }
}

impl Neg for SqrtExt {
    type Output = SqrtExt;
    fn neg(self) -> SqrtExt {
        SqrtExt { terms: self.terms.into_iter().map(|(s, c)| (s, -c)).collect() }
    }
}

impl Mul for SqrtExt {
    type Output = SqrtExt;
    fn mul(self, rhs: SqrtExt) -> SqrtExt {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b SqrtExt> for &'a SqrtExt {
    type Output = SqrtExt;
    fn mul(self, rhs: &'b SqrtExt) -> SqrtExt {
        let mut terms = BTreeMap::new();
        for (&s, a) in &self.terms {
            for (&t, b) in &rhs.terms {
                // sqrt(s) sqrt(t) = g sqrt(st/g^2), g = gcd(s, t); the
                // reduced radicand is square-free when s and t are.
                let g = s.gcd(&t);
                let radicand = (s / g) * (t / g);
                let coeff = a * b * rat_int(g);
                SqrtExt::insert_term(&mut terms, radicand, coeff);
            }
        }
        SqrtExt { terms }
    }
}

impl MulAssign for SqrtExt {
    fn mul_assign(&mut self, rhs: SqrtExt) {
        *self = &*self * &rhs;
    }
}

impl fmt::Display for SqrtExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&s, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if s == 1 {
                write!(f, "{}", render_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "sqrt({s})")?;
            } else {
                write!(f, "{}*sqrt({s})", render_rational(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn sq(c: (i64, i64), s: i64) -> SqrtExt {
        SqrtExt::sqrt_term(rat(c.0, c.1), s).unwrap()
    }

    #[test]
    fn product_reduces_radicands() {
        // sqrt(2)*sqrt(3) = sqrt(6)
        assert_eq!(sq((1, 1), 2) * sq((1, 1), 3), sq((1, 1), 6));
        // sqrt(6)*sqrt(10) = 2 sqrt(15)
        assert_eq!(sq((1, 1), 6) * sq((1, 1), 10), sq((2, 1), 15));
        // (1+sqrt(2))(1-sqrt(2)) = -1
        let a = SqrtExt::one() + sq((1, 1), 2);
        let b = SqrtExt::one() - sq((1, 1), 2);
        assert_eq!(a * b, SqrtExt::from_int(-1));
    }

    #[test]
    fn construction_canonicalizes() {
        // sqrt(8) = 2 sqrt(2)
        assert_eq!(SqrtExt::sqrt_term(rat(1, 1), 8).unwrap(), sq((2, 1), 2));
        // sqrt(1/2) = sqrt(2)/2
        assert_eq!(SqrtExt::sqrt_rational(&rat(1, 2)).unwrap(), sq((1, 2), 2));
        // sqrt(9/4) = 3/2
        assert_eq!(SqrtExt::sqrt_rational(&rat(9, 4)).unwrap(), SqrtExt::from_rational(rat(3, 2)));
    }

    #[test]
    fn inverse_single_term() {
        let x = sq((2, 3), 5);
        let inv = x.inverse().unwrap();
        assert!((x * inv).is_one());
        let multi = SqrtExt::one() + sq((1, 1), 2);
        assert!(matches!(multi.inverse(), Err(Error::MultiTermDivision(_))));
        assert!(matches!(SqrtExt::zero().inverse(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn rendering_round_trip() {
        let x = SqrtExt::from_rational(rat(-1, 2)) + sq((3, 4), 2) + sq((-1, 1), 15);
        let s = x.to_string();
        assert_eq!(s, "-1/2 + 3/4*sqrt(2) - sqrt(15)");
        assert_eq!(SqrtExt::parse(&s).unwrap(), x);
        assert_eq!(SqrtExt::parse("0").unwrap(), SqrtExt::zero());
    }

    #[test]
    fn radicands_stay_squarefree() {
        let x = sq((1, 1), 30) * sq((1, 1), 42); // sqrt(30*42) = 6 sqrt(35)
        for (s, _) in x.terms() {
            let (root, sf) = squarefree_decompose(s as i128).unwrap();
            assert_eq!(root, 1);
            assert_eq!(sf as i64, s);
        }
        assert_eq!(x, sq((6, 1), 35));
    }
}
