//! Central-element coefficient polynomials and exact Lagrange interpolation.
//!
//! A `CentralPoly` is a polynomial in one or two variables `u1, u2`, where
//! `u = (j + 1/2)^2` encodes a weight; substituting `u -> C + 1/4` turns it
//! into a polynomial in the Casimir element. Interpolation is exact Lagrange
//! over the rationals, performed coordinate-wise per radicand (the
//! square-root extension is a rational vector space).

use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{render_rational, Rational};
use crate::sqrtext::SqrtExt;

/// Polynomial in `u1` (and optionally `u2`) with `SqrtExt` coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralPoly {
    vars: usize,
    terms: BTreeMap<(u32, u32), SqrtExt>,
}

impl CentralPoly {
    pub fn zero(vars: usize) -> Self {
        assert!(vars == 1 || vars == 2);
        CentralPoly { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, c: SqrtExt) -> Self {
        let mut p = CentralPoly::zero(vars);
        p.set_term((0, 0), c);
        p
    }

    /// Build from `(exponents, coefficient)` pairs.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = ((u32, u32), SqrtExt)>) -> Self {
        let mut p = CentralPoly::zero(vars);
        for (e, c) in terms {
            let cur = p.terms.get(&e).cloned().unwrap_or_else(SqrtExt::zero) + c;
            p.set_term(e, cur);
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn set_term(&mut self, exps: (u32, u32), c: SqrtExt) {
        assert!(self.vars == 2 || exps.1 == 0, "second exponent in a univariate polynomial");
        if c.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &SqrtExt)> {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn degree(&self) -> (u32, u32) {
        let d1 = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let d2 = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        (d1, d2)
    }

    pub fn add(&self, other: &CentralPoly) -> CentralPoly {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            let cur = out.terms.get(&e).cloned().unwrap_or_else(SqrtExt::zero) + c.clone();
            out.set_term(e, cur);
        }
        out
    }

    pub fn scale(&self, c: &SqrtExt) -> CentralPoly {
        let mut out = CentralPoly::zero(self.vars);
        for (&e, a) in &self.terms {
            out.set_term(e, a * c);
        }
        out
    }

    /// Swap the two variables (tensor-factor transpose on coefficients).
    pub fn swap_vars(&self) -> CentralPoly {
        assert_eq!(self.vars, 2);
        let mut out = CentralPoly::zero(2);
        for (&(e1, e2), c) in &self.terms {
            out.set_term((e2, e1), c.clone());
        }
        out
    }

    /// Evaluate at rational points, one per variable.
    pub fn eval(&self, point: &[Rational]) -> SqrtExt {
        assert_eq!(point.len(), self.vars);
        let mut acc = SqrtExt::zero();
        for (&(e1, e2), c) in &self.terms {
            let mut factor = Rational::one();
            for _ in 0..e1 {
                factor *= &point[0];
            }
            for _ in 0..e2 {
                factor *= &point[if self.vars == 2 { 1 } else { 0 }];
            }
            acc += c.scale(&factor);
        }
        acc
    }

    /// Substitute `u_i -> x_i + shift` exactly (used for `u = C + 1/4`).
    /// Returns the polynomial in the shifted variables.
    pub fn shift_vars(&self, shift: &Rational) -> CentralPoly {
        let mut out = CentralPoly::zero(self.vars);
        for (&(e1, e2), c) in &self.terms {
            let p1 = binomial_shift(e1, shift);
            let p2 = binomial_shift(e2, shift);
            for (k1, b1) in p1.iter().enumerate() {
                for (k2, b2) in p2.iter().enumerate() {
                    let coeff = c.scale(&(b1 * b2));
                    let cur = out
                        .terms
                        .get(&(k1 as u32, k2 as u32))
                        .cloned()
                        .unwrap_or_else(SqrtExt::zero)
                        + coeff;
                    out.set_term((k1 as u32, k2 as u32), cur);
                }
            }
        }
        out
    }

    /// Render with the given variable names ("u" / "C", subscripted 1,2 when
    /// bivariate). Terms ascend by exponent.
    pub fn render(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&(e1, e2), c)) in self.terms.iter().enumerate() {
            let mono = if e1 == 0 && e2 == 0 {
                String::new()
            } else if self.vars == 1 {
                var_pow(var, e1)
            } else if e2 == 0 {
                var_pow(&format!("{var}1"), e1)
            } else if e1 == 0 {
                var_pow(&format!("{var}2"), e2)
            } else {
                format!("{}*{}", var_pow(&format!("{var}1"), e1), var_pow(&format!("{var}2"), e2))
            };
            let (sign_str, mag) = if c.num_terms() == 1 && c.single_term_sign() == Some(-1) {
                ("-", -c.clone())
            } else {
                ("", c.clone())
            };
            let sep = if i == 0 {
                sign_str.to_string()
            } else if sign_str == "-" {
                " - ".to_string()
            } else {
                " + ".to_string()
            };
            let coeff_str = if mag.num_terms() > 1 {
                format!("({mag})")
            } else {
                format!("{mag}")
            };
            if mono.is_empty() {
                out.push_str(&format!("{sep}{coeff_str}"));
            } else if mag.is_one() {
                out.push_str(&format!("{sep}{mono}"));
            } else {
                out.push_str(&format!("{sep}{coeff_str}*{mono}"));
            }
        }
        out
    }
}

fn var_pow(v: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => v.to_string(),
        _ => format!("{v}^{e}"),
    }
}

/// Coefficients of `(x + shift)^e` in `x`, index = power of `x`.
fn binomial_shift(e: u32, shift: &Rational) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); e as usize + 1];
    let mut binom = Rational::one();
    let mut pow = Rational::one();
    // (x + s)^e = sum_k C(e,k) s^(e-k) x^k, filled from k = e downwards
    for k in (0..=e).rev() {
        out[k as usize] = &binom * &pow;
        if k > 0 {
            binom = binom * Rational::from_integer(k.into())
                / Rational::from_integer((e - k + 1).into());
            pow *= shift;
        }
    }
    out
}

/// One interpolation sample: a rational grid point and the exact value there.
pub type Sample = (Vec<Rational>, SqrtExt);

/// Exact polynomial interpolation within per-variable degree bounds.
///
/// The first `bound+1` distinct coordinates per variable define the fitted
/// tensor grid; every remaining sample acts as a held-out check. A held-out
/// mismatch means the degree bound is too small and is reported as an error.
pub fn interpolate(samples: &[Sample], degree_bounds: &[usize]) -> Result<CentralPoly> {
    let vars = degree_bounds.len();
    assert!(vars == 1 || vars == 2);
    // distinct coordinates per variable, in first-seen order
    let mut coords: Vec<Vec<Rational>> = vec![Vec::new(); vars];
    for (pt, _) in samples {
        assert_eq!(pt.len(), vars);
        for (v, x) in pt.iter().enumerate() {
            if !coords[v].contains(x) {
                coords[v].push(x.clone());
            }
        }
    }
    for v in 0..vars {
        if coords[v].len() < degree_bounds[v] + 1 {
            return Err(Error::GridTooSmall {
                needed: degree_bounds[v] + 1,
                got: coords[v].len(),
            });
        }
        coords[v].truncate(degree_bounds[v] + 1);
    }

    let lookup = |pt: &[Rational]| -> Option<&SqrtExt> {
        samples.iter().find(|(p, _)| p == pt).map(|(_, v)| v)
    };

    // radicands appearing anywhere in the fitted grid values
    let mut radicands: BTreeSet<i64> = BTreeSet::new();
    for (_, value) in samples {
        for (s, _) in value.terms() {
            radicands.insert(s);
        }
    }

    let mut result = CentralPoly::zero(vars);
    for &radicand in &radicands {
        let component = |pt: &[Rational]| -> Result<Rational> {
            let v = lookup(pt).ok_or_else(|| Error::GridTooSmall {
                needed: coords.iter().map(|c| c.len()).product(),
                got: samples.len(),
            })?;
            Ok(v.terms()
                .find(|&(s, _)| s == radicand)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Rational::zero))
        };
        let poly = if vars == 1 {
            let values: Vec<Rational> = coords[0]
                .iter()
                .map(|x| component(std::slice::from_ref(x)))
                .collect::<Result<_>>()?;
            lagrange_1d(&coords[0], &values)
        } else {
            // interpolate along u2 for each u1 node, then along u1
            let mut rows: Vec<Vec<Rational>> = Vec::new();
            for x1 in &coords[0] {
                let values: Vec<Rational> = coords[1]
                    .iter()
                    .map(|x2| component(&[x1.clone(), x2.clone()]))
                    .collect::<Result<_>>()?;
                rows.push(lagrange_1d(&coords[1], &values));
            }
            let d2 = degree_bounds[1] + 1;
            let mut bivariate: Vec<Vec<Rational>> = Vec::new();
            for k2 in 0..d2 {
                let column: Vec<Rational> =
                    rows.iter().map(|r| r.get(k2).cloned().unwrap_or_else(Rational::zero)).collect();
                bivariate.push(lagrange_1d(&coords[0], &column));
            }
            // bivariate[k2][k1] = coefficient of u1^k1 u2^k2
            let mut flat: Vec<Vec<Rational>> = Vec::new();
            for k1 in 0..=degree_bounds[0] {
                flat.push(
                    (0..d2)
                        .map(|k2| bivariate[k2].get(k1).cloned().unwrap_or_else(Rational::zero))
                        .collect(),
                );
            }
            flat.into_iter().flatten().collect()
        };
        // merge this radicand's polynomial into the result
        if vars == 1 {
            for (k, c) in poly.iter().enumerate() {
                if !c.is_zero() {
                    let term = SqrtExt::sqrt_term(c.clone(), radicand)?;
                    let cur = result
                        .terms
                        .get(&(k as u32, 0))
                        .cloned()
                        .unwrap_or_else(SqrtExt::zero)
                        + term;
                    result.set_term((k as u32, 0), cur);
                }
            }
        } else {
            let d2 = degree_bounds[1] + 1;
            for (idx, c) in poly.iter().enumerate() {
                if !c.is_zero() {
                    let k1 = (idx / d2) as u32;
                    let k2 = (idx % d2) as u32;
                    let term = SqrtExt::sqrt_term(c.clone(), radicand)?;
                    let cur = result
                        .terms
                        .get(&(k1, k2))
                        .cloned()
                        .unwrap_or_else(SqrtExt::zero)
                        + term;
                    result.set_term((k1, k2), cur);
                }
            }
        }
    }

    // every supplied sample, including held-out points, must be reproduced
    for (pt, value) in samples {
        if &result.eval(pt) != value {
            return Err(Error::DegreeBoundExceeded {
                bound: *degree_bounds.iter().max().unwrap(),
                point: format!(
                    "({})",
                    pt.iter().map(render_rational).collect::<Vec<_>>().join(", ")
                ),
            });
        }
    }
    Ok(result)
}

/// Dense coefficients of the unique degree-(n-1) polynomial through the
/// given nodes, by exact Lagrange expansion.
fn lagrange_1d(nodes: &[Rational], values: &[Rational]) -> Vec<Rational> {
    let n = nodes.len();
    let mut acc = vec![Rational::zero(); n];
    for i in 0..n {
        if values[i].is_zero() {
            continue;
        }
        // numerator product prod_{j != i} (x - x_j)
        let mut basis = vec![Rational::zero(); n];
        basis[0] = Rational::one();
        let mut deg = 0;
        let mut denom = Rational::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            denom *= &nodes[i] - &nodes[j];
            for k in (0..=deg).rev() {
                let low = basis[k].clone();
                basis[k + 1] += &low;
                basis[k] = -(&low * &nodes[j]);
            }
            deg += 1;
        }
        let w = &values[i] / denom;
        for k in 0..n {
            acc[k] += &basis[k] * &w;
        }
    }
    acc
}

impl fmt::Display for CentralPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("u"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn pt1(x: i64) -> Vec<Rational> {
        vec![rat_int(x)]
    }

    #[test]
    fn constant_through_three_points() {
        let samples: Vec<Sample> = [0, 1, 2]
            .iter()
            .map(|&x| (pt1(x), SqrtExt::from_int(5)))
            .collect();
        let p = interpolate(&samples, &[2]).unwrap();
        assert_eq!(p.terms().count(), 1);
        assert_eq!(p.eval(&pt1(7)), SqrtExt::from_int(5));
    }

    #[test]
    fn line_through_two_points() {
        // u - 1/4 through (0, -1/4), (1, 3/4)
        let samples = vec![
            (pt1(0), SqrtExt::from_rational(rat(-1, 4))),
            (pt1(1), SqrtExt::from_rational(rat(3, 4))),
        ];
        let p = interpolate(&samples, &[1]).unwrap();
        assert_eq!(p.eval(&pt1(3)), SqrtExt::from_rational(rat(11, 4)));
    }

    #[test]
    fn heldout_detects_degree_violation() {
        // u^2 sampled at 4 points with bound 1
        let samples: Vec<Sample> = [0, 1, 2, 3]
            .iter()
            .map(|&x| (pt1(x), SqrtExt::from_int(x * x)))
            .collect();
        match interpolate(&samples, &[1]) {
            Err(Error::DegreeBoundExceeded { .. }) => {}
            other => panic!("expected degree bound error, got {other:?}"),
        }
        assert!(interpolate(&samples, &[2]).is_ok());
    }

    #[test]
    fn grid_too_small() {
        let samples = vec![(pt1(0), SqrtExt::zero())];
        assert!(matches!(
            interpolate(&samples, &[1]),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn bivariate_with_radicands() {
        // sqrt(2)*u1*u2 + 3*u2^2
        let truth = CentralPoly::from_terms(
            2,
            [
                ((1, 1), SqrtExt::sqrt_term(rat(1, 1), 2).unwrap()),
                ((0, 2), SqrtExt::from_int(3)),
            ],
        );
        let mut samples = Vec::new();
        for x in 0..4i64 {
            for y in 0..4i64 {
                let p = vec![rat_int(x), rat_int(y)];
                samples.push((p.clone(), truth.eval(&p)));
            }
        }
        let fit = interpolate(&samples, &[2, 2]).unwrap();
        assert_eq!(fit, truth);
    }

    #[test]
    fn shift_to_casimir_variable() {
        // u - 1/4 becomes C under u = C + 1/4
        let p = CentralPoly::from_terms(
            1,
            [((1, 0), SqrtExt::one()), ((0, 0), SqrtExt::from_rational(rat(-1, 4)))],
        );
        let c = p.shift_vars(&rat(1, 4));
        assert_eq!(c, CentralPoly::from_terms(1, [((1, 0), SqrtExt::one())]));
        assert_eq!(c.render("C"), "C");
    }
}
