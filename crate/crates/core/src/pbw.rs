//! The enveloping algebra U(su2) on the normal-ordered monomial basis
//! `E^a H^b F^c`, with the product defined by rewriting through the
//! commutation relations `[H,E] = 2E`, `[H,F] = -2F`, `[E,F] = H`.

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use crate::rational::{rat_int, Rational};
use crate::sqrtext::SqrtExt;

/// Exponent triple `(a, b, c)` of a normal-ordered monomial `E^a H^b F^c`.
pub type Monomial = (u32, u32, u32);

/// Element of U(su2): finite combination of normal-ordered monomials.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PbwElement {
    terms: BTreeMap<Monomial, SqrtExt>,
}

impl PbwElement {
    pub fn zero() -> Self {
        PbwElement { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        PbwElement::monomial((0, 0, 0), SqrtExt::one())
    }

    pub fn monomial(m: Monomial, c: SqrtExt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        PbwElement { terms }
    }

    /// The generator `E`.
    pub fn gen_e() -> Self {
        PbwElement::monomial((1, 0, 0), SqrtExt::one())
    }

    /// The generator `H`.
    pub fn gen_h() -> Self {
        PbwElement::monomial((0, 1, 0), SqrtExt::one())
    }

    /// The generator `F`.
    pub fn gen_f() -> Self {
        PbwElement::monomial((0, 0, 1), SqrtExt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &SqrtExt)> {
        self.terms.iter().map(|(&m, c)| (m, c))
    }

    pub fn coeff(&self, m: Monomial) -> SqrtExt {
        self.terms.get(&m).cloned().unwrap_or_else(SqrtExt::zero)
    }

    /// Total filtration degree `max(a + b + c)`.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b, c)| a + b + c).max().unwrap_or(0)
    }

    fn insert(&mut self, m: Monomial, c: SqrtExt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.insert(m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        for (&m, c) in &other.terms {
            out.insert(m, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> PbwElement {
        PbwElement { terms: self.terms.iter().map(|(&m, c)| (m, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &SqrtExt) -> PbwElement {
        if c.is_zero() {
            return PbwElement::zero();
        }
        PbwElement { terms: self.terms.iter().map(|(&m, a)| (m, a * c)).collect() }
    }

    pub fn scale_rat(&self, r: &Rational) -> PbwElement {
        self.scale(&SqrtExt::from_rational(r.clone()))
    }
}

/// Normal-ordered product in U(su2).
///
/// Out-of-order generator pairs are rewritten with `HE -> EH + 2E`,
/// `FE -> EF - H`, `FH -> HF + 2F`; the grouped closed forms below apply
/// those rules exhaustively (each application strictly lowers the number of
/// inversions at fixed degree, so the rewriting terminates).
pub fn normal_product(x: &PbwElement, y: &PbwElement) -> PbwElement {
    let mut out = PbwElement::zero();
    for (mx, cx) in x.terms() {
        for (my, cy) in y.terms() {
            let prod = monomial_product(mx, my);
            let coeff = cx * cy;
            for (&m, c) in &prod.terms {
                out.insert(m, c * &coeff);
            }
        }
    }
    out
}

/// Commutator `[g, x] = gx - xg`, the adjoint action of `g`.
pub fn adjoint(g: &PbwElement, x: &PbwElement) -> PbwElement {
    normal_product(g, x).sub(&normal_product(x, g))
}

/// Iterated adjoint `(ad g)^n x`.
pub fn adjoint_pow(g: &PbwElement, n: u32, x: &PbwElement) -> PbwElement {
    let mut acc = x.clone();
    for _ in 0..n {
        acc = adjoint(g, &acc);
    }
    acc
}

/// The quadratic Casimir element `C = EF + H^2/4 - H/2`, normalized so that
/// `C` acts as `j(j+1)` on the weight-j representation.
pub fn casimir() -> PbwElement {
    let mut c = PbwElement::zero();
    c.insert((1, 0, 1), SqrtExt::one());
    c.insert((0, 2, 0), SqrtExt::from_rational(Rational::new(1.into(), 4.into())));
    c.insert((0, 1, 0), SqrtExt::from_rational(Rational::new((-1).into(), 2.into())));
    c
}

/// `C^n`, memoized.
pub fn casimir_pow(n: u32) -> PbwElement {
    static POWERS: Lazy<RwLock<Vec<PbwElement>>> =
        Lazy::new(|| RwLock::new(vec![PbwElement::one()]));
    {
        let table = POWERS.read().unwrap();
        if (n as usize) < table.len() {
            return table[n as usize].clone();
        }
    }
    let mut table = POWERS.write().unwrap();
    while table.len() <= n as usize {
        let next = normal_product(table.last().unwrap(), &casimir());
        table.push(next);
    }
    table[n as usize].clone()
}

/// Product of two monomials, memoized on the exponent pair.
fn monomial_product(x: Monomial, y: Monomial) -> PbwElement {
    static CACHE: Lazy<RwLock<BTreeMap<(Monomial, Monomial), PbwElement>>> =
        Lazy::new(|| RwLock::new(BTreeMap::new()));
    if let Some(hit) = CACHE.read().unwrap().get(&(x, y)) {
        return hit.clone();
    }
    let (a1, b1, c1) = x;
    let (a2, b2, c2) = y;
    // F^c1 E^a2 is the only out-of-order block; reorder it, then absorb the
    // H-powers with H^b E^a = E^a (H+2a)^b and F^c H^b = (H+2c)^b F^c.
    let mid = f_pow_e_pow(c1, a2);
    let mut out = PbwElement::zero();
    for ((a, b, c), coeff) in mid.terms() {
        // E^a1 H^b1 (E^a H^b F^c) H^b2 F^c2
        //   = E^(a1+a) (H+2a)^b1 H^b (H+2c)^b2 F^(c+c2)
        let p1 = h_shift_poly(b1, 2 * a as i64);
        let p2 = h_shift_poly(b2, 2 * c as i64);
        let combined = poly_mul(&poly_mul(&p1, &p2), &h_power(b));
        for (k, r) in combined.iter().enumerate() {
            if !r.is_zero() {
                let m = (a1 + a, k as u32, c + c2);
                out.insert(m, coeff.scale(r));
            }
        }
    }
    CACHE.write().unwrap().insert((x, y), out.clone());
    out
}

/// `F^c E^a` in normal order, by the single-step rule
/// `F E^a = E^a F - a E^(a-1) (H + a - 1)`.
fn f_pow_e_pow(c: u32, a: u32) -> PbwElement {
    if c == 0 || a == 0 {
        return PbwElement::monomial((a, 0, c), SqrtExt::one());
    }
    // peel one F from the left: F^c E^a = F^(c-1) (F E^a)
    let fe = {
        let mut t = PbwElement::monomial((a, 0, 1), SqrtExt::one());
        let mut lower = PbwElement::zero();
        lower.insert((a - 1, 1, 0), SqrtExt::from_int(-(a as i64)));
        lower.insert((a - 1, 0, 0), SqrtExt::from_int(-(a as i64) * (a as i64 - 1)));
        t = t.add(&lower);
        t
    };
    let rest = PbwElement::monomial((0, 0, c - 1), SqrtExt::one());
    normal_product(&rest, &fe)
}

/// Dense coefficients of `(H + shift)^b` as a polynomial in `H`.
fn h_shift_poly(b: u32, shift: i64) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); b as usize + 1];
    out[0] = Rational::one();
    let mut deg = 0usize;
    for _ in 0..b {
        for k in (0..=deg).rev() {
            let low = out[k].clone();
            out[k + 1] += &low;
            out[k] = low * rat_int(shift);
        }
        deg += 1;
    }
    out
}

fn h_power(b: u32) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); b as usize + 1];
    out[b as usize] = Rational::one();
    out
}

fn poly_mul(p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            if !b.is_zero() {
                out[i + j] += a * b;
            }
        }
    }
    out
}

/// Element of U(su2) tensor U(su2) with scalar coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorSquareElement {
    terms: BTreeMap<(Monomial, Monomial), SqrtExt>,
}

impl TensorSquareElement {
    pub fn zero() -> Self {
        Default::default()
    }

    pub fn one() -> Self {
        let mut t = TensorSquareElement::zero();
        t.insert(((0, 0, 0), (0, 0, 0)), SqrtExt::one());
        t
    }

    pub fn insert(&mut self, key: (Monomial, Monomial), c: SqrtExt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((Monomial, Monomial), &SqrtExt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    /// Build from `x tensor y` of two PBW elements.
    pub fn tensor(x: &PbwElement, y: &PbwElement) -> Self {
        let mut out = TensorSquareElement::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                out.insert((mx, my), cx * cy);
            }
        }
        out
    }

    pub fn add(&self, other: &TensorSquareElement) -> TensorSquareElement {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.insert(k, c.clone());
        }
        out
    }

    /// Tensor-factor swap `tau(a tensor b) = b tensor a`.
    pub fn swap_factors(&self) -> TensorSquareElement {
        let mut out = TensorSquareElement::zero();
        for (&(m1, m2), c) in &self.terms {
            out.insert((m2, m1), c.clone());
        }
        out
    }
}

fn render_monomial(m: Monomial) -> String {
    let (a, b, c) = m;
    let mut parts = Vec::new();
    for (sym, e) in [("E", a), ("H", b), ("F", c)] {
        match e {
            0 => {}
            1 => parts.push(sym.to_string()),
            _ => parts.push(format!("{sym}^{e}")),
        }
    }
    parts.join(" ")
}

impl fmt::Display for PbwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // terms sorted by (a, b, c) descending
        for (i, (&m, c)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if c.num_terms() == 1 && c.single_term_sign() == Some(-1) {
                ("-", -c.clone())
            } else {
                ("", c.clone())
            };
            if i == 0 {
                write!(f, "{sign}")?;
            } else if sign == "-" {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = render_monomial(m);
            let coeff = if mag.num_terms() > 1 { format!("({mag})") } else { format!("{mag}") };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if mag.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for TensorSquareElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(&(m1, m2), c)| {
                let left = if m1 == (0, 0, 0) { "1".into() } else { render_monomial(m1) };
                let right = if m2 == (0, 0, 0) { "1".into() } else { render_monomial(m2) };
                format!("({c}) * {left} (x) {right}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutation_relations() {
        let e = PbwElement::gen_e();
        let h = PbwElement::gen_h();
        let f = PbwElement::gen_f();
        // F E = EF - H
        let fe = normal_product(&f, &e);
        let mut expect = PbwElement::monomial((1, 0, 1), SqrtExt::one());
        expect = expect.sub(&PbwElement::gen_h());
        assert_eq!(fe, expect);
        // H E = EH + 2E
        let he = normal_product(&h, &e);
        let mut expect = PbwElement::monomial((1, 1, 0), SqrtExt::one());
        expect = expect.add(&e.scale(&SqrtExt::from_int(2)));
        assert_eq!(he, expect);
        // E E = E^2
        assert_eq!(normal_product(&e, &e), PbwElement::monomial((2, 0, 0), SqrtExt::one()));
        // adjoint relations
        assert!(adjoint(&e, &e).is_zero());
        assert_eq!(adjoint(&h, &e), e.scale(&SqrtExt::from_int(2)));
        assert_eq!(adjoint(&f, &e), PbwElement::gen_h().neg());
        assert_eq!(adjoint(&h, &f), f.scale(&SqrtExt::from_int(-2)));
    }

    #[test]
    fn casimir_is_central() {
        let c = casimir();
        for g in [PbwElement::gen_e(), PbwElement::gen_h(), PbwElement::gen_f()] {
            assert!(adjoint(&g, &c).is_zero(), "[{g}, C] != 0");
        }
        // against a composite element
        let x = normal_product(&PbwElement::gen_e(), &normal_product(&PbwElement::gen_h(), &PbwElement::gen_f()));
        assert_eq!(normal_product(&c, &x), normal_product(&x, &c));
    }

    #[test]
    fn filtration_degree() {
        let e = PbwElement::gen_e();
        let f = PbwElement::gen_f();
        let ef = normal_product(&e, &f);
        assert_eq!(ef.degree(), 2);
        let fe = normal_product(&f, &e);
        assert_eq!(fe.degree(), 2);
        assert_eq!(fe.coeff((1, 0, 1)), SqrtExt::one());
    }

    #[test]
    fn h_shift() {
        // (H + 2)^2 = H^2 + 4H + 4
        let p = h_shift_poly(2, 2);
        assert_eq!(p, vec![rat_int(4), rat_int(4), rat_int(1)]);
    }
}
