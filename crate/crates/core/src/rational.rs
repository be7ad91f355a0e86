//! Arbitrary-precision rationals and exact factorial machinery.
//!
//! Rationals are `num_rational::BigRational`, which already maintains the
//! invariants we need (lowest terms, positive denominator, zero as 0/1).
//! This module adds parsing/rendering in the canonical `p/q` form and the
//! factorial / Pochhammer helpers used throughout the recoupling formulas.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use std::sync::RwLock;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Shorthand for a small rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(p.into())
}

/// Canonical rendering: `p/q`, or just `p` when `q = 1`.
pub fn render_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the canonical form; decimals are rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if s.contains('.') {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| bad())?;
        let den: BigInt = q.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    } else {
        let num: BigInt = s.parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(num))
    }
}

static FACTORIALS: Lazy<RwLock<Vec<BigInt>>> = Lazy::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!` as a big integer, memoized.
pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    {
        let table = FACTORIALS.read().unwrap();
        if n < table.len() {
            return table[n].clone();
        }
    }
    let mut table = FACTORIALS.write().unwrap();
    while table.len() <= n {
        let next = table.last().unwrap() * BigInt::from(table.len());
        table.push(next);
    }
    table[n].clone()
}

/// Reciprocal factorial with the Gamma-pole convention: `1/n! = 0` for `n < 0`.
pub fn recip_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), factorial(n as u32))
    }
}

/// Rising Pochhammer symbol `(x)_n = x (x+1) ... (x+n-1)` of a rational.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += Rational::one();
    }
    acc
}

/// Integer rising Pochhammer `(x)_n` for integer `x`.
pub fn pochhammer_int(x: i64, n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 0..n as i64 {
        acc *= BigInt::from(x + k);
    }
    acc
}

/// Binomial coefficient `C(n, k)` for integer `n >= 0`; zero outside range.
pub fn binomial(n: u32, k: i64) -> BigInt {
    if k < 0 || k as u32 > n {
        return BigInt::zero();
    }
    let k = k as u32;
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Exact square-free decomposition `n = root^2 * squarefree` of a positive
/// integer by trial division. Radicands in this crate come from small
/// factorial quotients; anything above 10^15 is rejected rather than
/// factored.
pub fn squarefree_decompose(n: i128) -> Result<(i128, i128)> {
    if n <= 0 {
        return Err(Error::Parse(format!("radicand must be positive, got {n}")));
    }
    if n > 1_000_000_000_000_000 {
        return Err(Error::RadicandTooLarge(n));
    }
    let mut rest = n;
    let mut root: i128 = 1;
    let mut squarefree: i128 = 1;
    let mut d: i128 = 2;
    while d * d <= rest {
        if rest % d == 0 {
            let mut e = 0;
            while rest % d == 0 {
                rest /= d;
                e += 1;
            }
            root *= d.pow(e / 2);
            if e % 2 == 1 {
                squarefree *= d;
            }
        }
        d += 1;
    }
    squarefree *= rest; // rest is 1 or a prime
    Ok((root, squarefree))
}

/// Accumulates a product of factorials, integers and rationals whose exact
/// square root is wanted. Keeping factorials symbolic lets the square part
/// be split off by prime exponents instead of factoring huge integers.
#[derive(Debug, Clone, Default)]
pub struct SqrtRatio {
    factorial_pows: Vec<(u32, i64)>,
    extra: Option<Rational>,
}

impl SqrtRatio {
    pub fn one() -> Self {
        SqrtRatio { factorial_pows: Vec::new(), extra: None }
    }

    /// Multiply by `(n!)^pow`.
    pub fn fact(mut self, n: u32, pow: i64) -> Self {
        if pow != 0 {
            self.factorial_pows.push((n, pow));
        }
        self
    }

    /// Multiply by a rational to a signed power.
    pub fn rat(mut self, r: &Rational, pow: i64) -> Self {
        if pow == 0 {
            return self;
        }
        let mut factor = Rational::one();
        let base = if pow > 0 { r.clone() } else { r.recip() };
        for _ in 0..pow.unsigned_abs() {
            factor *= &base;
        }
        self.extra = Some(self.extra.take().unwrap_or_else(Rational::one) * factor);
        self
    }

    pub fn int(self, n: i64, pow: i64) -> Self {
        self.rat(&rat_int(n), pow)
    }

    /// The exact value of the accumulated product.
    pub fn value(&self) -> Rational {
        let mut v = self.extra.clone().unwrap_or_else(Rational::one);
        for &(n, pow) in &self.factorial_pows {
            let f = Rational::from_integer(factorial(n));
            if pow > 0 {
                for _ in 0..pow {
                    v *= &f;
                }
            } else {
                for _ in 0..(-pow) {
                    v /= &f;
                }
            }
        }
        v
    }

    /// Split the value as `rat^2 * squarefree` with `squarefree` a positive
    /// square-free integer; i.e. `sqrt(value) = rat * sqrt(squarefree)`.
    ///
    /// Errors if the value is negative; returns `(0, 1)` for zero.
    pub fn sqrt_parts(&self) -> Result<(Rational, i64)> {
        let mut primes: std::collections::BTreeMap<u64, i64> = Default::default();
        let max_n = self.factorial_pows.iter().map(|&(n, _)| n).max().unwrap_or(0);
        for p in primes_up_to(max_n as u64) {
            let mut e: i64 = 0;
            for &(n, pow) in &self.factorial_pows {
                e += legendre_exponent(n as u64, p) * pow;
            }
            if e != 0 {
                primes.insert(p, e);
            }
        }
        let mut sign = Sign::Plus;
        if let Some(extra) = &self.extra {
            if extra.is_zero() {
                return Ok((Rational::zero(), 1));
            }
            if extra.is_negative() {
                sign = Sign::Minus;
            }
            for (int, s) in [(extra.numer().abs(), 1i64), (extra.denom().clone(), -1i64)] {
                let mut rest = int
                    .to_i128()
                    .ok_or_else(|| Error::Parse("rational factor too large to factor".into()))?;
                let mut d: i128 = 2;
                while d * d <= rest {
                    while rest % d == 0 {
                        *primes.entry(d as u64).or_insert(0) += s;
                        rest /= d;
                    }
                    d += 1;
                }
                if rest > 1 {
                    *primes.entry(rest as u64).or_insert(0) += s;
                }
            }
        }
        if sign == Sign::Minus {
            return Err(Error::Parse("square root of a negative value".into()));
        }
        let mut root = Rational::one();
        let mut squarefree: i128 = 1;
        for (p, e) in primes {
            let half = e.div_euclid(2);
            let odd = e.rem_euclid(2) == 1;
            let pb = BigInt::from(p);
            if half >= 0 {
                root *= Rational::from_integer(pb.pow(half as u32));
            } else {
                root /= Rational::from_integer(pb.pow((-half) as u32));
            }
            if odd {
                squarefree *= p as i128;
                if squarefree > 1_000_000_000_000_000 {
                    return Err(Error::RadicandTooLarge(squarefree));
                }
            }
        }
        Ok((root, squarefree as i64))
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; (n + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p as usize] {
            out.push(p);
            let mut q = p * p;
            while q <= n {
                sieve[q as usize] = false;
                q += p;
            }
        }
    }
    out
}

/// Exponent of prime `p` in `n!` (Legendre's formula).
fn legendre_exponent(n: u64, p: u64) -> i64 {
    let mut e = 0;
    let mut q = p;
    while q <= n {
        e += (n / q) as i64;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree() {
        assert_eq!(squarefree_decompose(1).unwrap(), (1, 1));
        assert_eq!(squarefree_decompose(8).unwrap(), (2, 2));
        assert_eq!(squarefree_decompose(360).unwrap(), (6, 10));
        assert!(squarefree_decompose(2_000_000_000_000_000).is_err());
    }

    #[test]
    fn sqrt_ratio_factorials() {
        // sqrt(6!/ (3! 3!)) = sqrt(20) = 2 sqrt(5)
        let (root, sf) = SqrtRatio::one().fact(6, 1).fact(3, -2).sqrt_parts().unwrap();
        assert_eq!(root, rat_int(2));
        assert_eq!(sf, 5);
        // sqrt(1/2) = (1/2) sqrt(2)
        let (root, sf) = SqrtRatio::one().rat(&rat(1, 2), 1).sqrt_parts().unwrap();
        assert_eq!(root, rat(1, 2));
        assert_eq!(sf, 2);
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer_int(-3, 4), BigInt::zero());
        assert_eq!(pochhammer_int(-3, 3), BigInt::from(-6));
        assert_eq!(pochhammer(&rat(1, 2), 3), rat(15, 8));
    }

    #[test]
    fn parse_render() {
        assert_eq!(render_rational(&rat(-3, 6)), "-1/2");
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert!(parse_rational("0.5").is_err());
    }
}
