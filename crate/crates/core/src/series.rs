//! Truncated formal power series in the deformation parameter `h`.
//!
//! A series carries its truncation order `N` and exactly `N+1` coefficients
//! in the square-root extension field. Arithmetic never extends past the
//! truncation; combining series of different orders truncates to the
//! minimum and marks the result with a warning flag.

use num_traits::One;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};
use crate::sqrtext::SqrtExt;

/// Formal power series in `h`, truncated at a fixed order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HSeries {
    coeffs: Vec<SqrtExt>,
    truncation_mixed: bool,
}

impl HSeries {
    pub fn zero(order: usize) -> Self {
        HSeries { coeffs: vec![SqrtExt::zero(); order + 1], truncation_mixed: false }
    }

    pub fn one(order: usize) -> Self {
        HSeries::constant(SqrtExt::one(), order)
    }

    pub fn constant(c: SqrtExt, order: usize) -> Self {
        let mut s = HSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c * h^k`, zero if `k` exceeds the order.
    pub fn monomial(c: SqrtExt, k: usize, order: usize) -> Self {
        let mut s = HSeries::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<SqrtExt>) -> Self {
        assert!(!coeffs.is_empty());
        HSeries { coeffs, truncation_mixed: false }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `h^k`.
    pub fn coeff(&self, k: usize) -> &SqrtExt {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[SqrtExt] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &SqrtExt {
        &self.coeffs[0]
    }

    /// Set when two series of different truncation orders were combined.
    pub fn truncation_mixed(&self) -> bool {
        self.truncation_mixed
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Restrict to a lower (or equal) truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a series by truncation");
        HSeries {
            coeffs: self.coeffs[..=order].to_vec(),
            truncation_mixed: self.truncation_mixed,
        }
    }

    pub fn scale(&self, c: &SqrtExt) -> Self {
        HSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            truncation_mixed: self.truncation_mixed,
        }
    }

    pub fn scale_rat(&self, r: &Rational) -> Self {
        HSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(r)).collect(),
            truncation_mixed: self.truncation_mixed,
        }
    }

    /// Substitute `h -> -h` (negate odd coefficients).
    pub fn flip_sign(&self) -> Self {
        HSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
            truncation_mixed: self.truncation_mixed,
        }
    }

    fn common_order(&self, rhs: &HSeries) -> (usize, bool) {
        let order = self.order().min(rhs.order());
        let mixed =
            self.truncation_mixed || rhs.truncation_mixed || self.order() != rhs.order();
        (order, mixed)
    }

    /// Multiplicative inverse to the truncation order; the constant term
    /// must be nonzero (and single-term, since only those invert exactly).
    pub fn inverse(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let c0_inv = self.coeffs[0].inverse()?;
        let n = self.order();
        let mut out = vec![SqrtExt::zero(); n + 1];
        out[0] = c0_inv.clone();
        for k in 1..=n {
            let mut acc = SqrtExt::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -(&c0_inv * &acc);
        }
        Ok(HSeries { coeffs: out, truncation_mixed: self.truncation_mixed })
    }

    /// Principal square root to the truncation order.
    ///
    /// The constant term must be a positive single-term value whose square
    /// root exists in the field (i.e. a positive rational; `sqrt(p/q)` is
    /// stored as `sqrt(pq)/q`).
    pub fn sqrt(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NoSeriesSqrt("zero constant term".into()));
        }
        if c0.as_single_term().is_none() {
            return Err(Error::NoSeriesSqrt(format!(
                "constant term {c0} is not a single radicand term"
            )));
        }
        if c0.single_term_sign() == Some(-1) {
            return Err(Error::NoSeriesSqrt(format!("constant term {c0} is negative")));
        }
        let t0 = c0.sqrt()?;
        let t0_double_inv = (t0.clone() + t0.clone()).inverse()?;
        let n = self.order();
        let mut out = vec![SqrtExt::zero(); n + 1];
        out[0] = t0;
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &out[i] * &out[k - i];
            }
            out[k] = &acc * &t0_double_inv;
        }
        Ok(HSeries { coeffs: out, truncation_mixed: self.truncation_mixed })
    }

    /// `exp` of a series with zero constant term, via `t' = s' t`.
    pub fn exp_nilpotent(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Parse("exp requires a zero constant term".into()));
        }
        let n = self.order();
        let mut out = vec![SqrtExt::zero(); n + 1];
        out[0] = SqrtExt::one();
        for k in 1..=n {
            let mut acc = SqrtExt::zero();
            for i in 1..=k {
                acc += (&self.coeffs[i] * &out[k - i]).scale(&rat_int(i as i64));
            }
            out[k] = acc.scale(&Rational::new(1.into(), (k as i64).into()));
        }
        Ok(HSeries { coeffs: out, truncation_mixed: self.truncation_mixed })
    }

    /// `exp(r*h)` as an exact series.
    pub fn exp_linear(r: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = Rational::one();
        for k in 0..=order {
            if k > 0 {
                term = &term * r / Rational::from_integer((k as i64).into());
            }
            coeffs.push(SqrtExt::from_rational(term.clone()));
        }
        HSeries::from_coeffs(coeffs)
    }

    /// Parse the canonical rendering produced by `Display`.
    pub fn parse(input: &str, order: usize) -> Result<Self> {
        let s = input.trim();
        let mut out = HSeries::zero(order);
        if s == "0" {
            return Ok(out);
        }
        for (sign, term) in split_sum(s) {
            let (coeff_str, power) = match term.find("h^") {
                Some(idx) => {
                    let p: usize = term[idx + 2..]
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad power in {term:?}")))?;
                    (term[..idx].trim().trim_end_matches('*').trim(), p)
                }
                None => match term.strip_suffix('h') {
                    Some(rest) => (rest.trim().trim_end_matches('*').trim(), 1),
                    None => (term.trim(), 0),
                },
            };
            let coeff_str = coeff_str.trim();
            let coeff = if coeff_str.is_empty() {
                SqrtExt::one()
            } else if coeff_str == "-" {
                SqrtExt::from_int(-1)
            } else {
                let inner = coeff_str
                    .strip_prefix('(')
                    .and_then(|c| c.strip_suffix(')'))
                    .unwrap_or(coeff_str);
                SqrtExt::parse(inner)?
            };
            if power <= order {
                let signed = if sign < 0 { -coeff } else { coeff };
                let old = out.coeffs[power].clone();
                out.coeffs[power] = old + signed;
            }
        }
        Ok(out)
    }
}

/// Split a rendered sum on top-level " + " / " - ", respecting parentheses.
fn split_sum(s: &str) -> Vec<(i64, &str)> {
    let mut parts = Vec::new();
    let bytes = s.as_bytes();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut sign = 1i64;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth = depth.saturating_sub(1),
            b'+' | b'-'
                if depth == 0
                    && i > 0
                    && i + 1 < bytes.len()
                    && bytes[i - 1] == b' '
                    && bytes[i + 1] == b' ' =>
            {
                parts.push((sign, s[start..i - 1].trim()));
                sign = if bytes[i] == b'+' { 1 } else { -1 };
                start = i + 2;
            }
            _ => {}
        }
        i += 1;
    }
    parts.push((sign, s[start..].trim()));
    parts
}

impl Add for HSeries {
    type Output = HSeries;
    fn add(self, rhs: HSeries) -> HSeries {
        &self + &rhs
    }
}

impl<'a, 'b> Add<&'b HSeries> for &'a HSeries {
    type Output = HSeries;
    fn add(self, rhs: &'b HSeries) -> HSeries {
        let (order, mixed) = self.common_order(rhs);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() + rhs.coeffs[k].clone())
            .collect();
        HSeries { coeffs, truncation_mixed: mixed }
    }
}

impl AddAssign<&HSeries> for HSeries {
    fn add_assign(&mut self, rhs: &HSeries) {
        *self = &*self + rhs;
    }
}

impl Sub for HSeries {
    type Output = HSeries;
    fn sub(self, rhs: HSeries) -> HSeries {
        &self - &rhs
    }
}

impl<'a, 'b> Sub<&'b HSeries> for &'a HSeries {
    type Output = HSeries;
    fn sub(self, rhs: &'b HSeries) -> HSeries {
        let (order, mixed) = self.common_order(rhs);
        let coeffs = (0..=order)
            .map(|k| self.coeffs[k].clone() - rhs.coeffs[k].clone())
            .collect();
        HSeries { coeffs, truncation_mixed: mixed }
    }
}

impl Neg for HSeries {
    type Output = HSeries;
    fn neg(self) -> HSeries {
        HSeries {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
            truncation_mixed: self.truncation_mixed,
        }
    }
}

impl Mul for HSeries {
    type Output = HSeries;
    fn mul(self, rhs: HSeries) -> HSeries {
        &self * &rhs
    }
}

impl<'a, 'b> Mul<&'b HSeries> for &'a HSeries {
    type Output = HSeries;
    fn mul(self, rhs: &'b HSeries) -> HSeries {
        let (order, mixed) = self.common_order(rhs);
        let mut coeffs = vec![SqrtExt::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if rhs.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &rhs.coeffs[j];
            }
        }
        HSeries { coeffs, truncation_mixed: mixed }
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let needs_parens = c.num_terms() > 1;
            let (lead_neg, mag) = if !needs_parens && c.single_term_sign() == Some(-1) {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if wrote {
                write!(f, " {} ", if lead_neg { "-" } else { "+" })?;
            } else if lead_neg {
                write!(f, "-")?;
            }
            let coeff_str =
                if needs_parens { format!("({mag})") } else { format!("{mag}") };
            match k {
                0 => write!(f, "{coeff_str}")?,
                1 if mag.is_one() => write!(f, "h")?,
                1 => write!(f, "{coeff_str}*h")?,
                _ if mag.is_one() => write!(f, "h^{k}")?,
                _ => write!(f, "{coeff_str}*h^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}
