//! Symmetric q-numbers, q-Pochhammer expansions, and q-deformed
//! Clebsch-Gordan coefficients as exact series in the deformation
//! parameter.
//!
//! The symmetric q-number is `[x] = sinh(x h)/sinh(h)`; its expansion uses
//! the Bernoulli-number series for `ln(sinh x / x)`, and the q-Pochhammer
//! quotient `[x]_n / (x)_n` follows by summing with Bernoulli polynomials.
//!
//! q-deformed Clebsch-Gordan coefficients are computed constructively: the
//! deformed tensor representation is reduced by solving for the
//! highest-weight vector of every block (an order-by-order forward
//! substitution in the classical coupled basis) and lowering with the
//! deformed coproduct. That pins the convention to the chosen coproduct
//! orientation and keeps every coefficient exact.

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::matrix::Mat;
use crate::rational::{binomial, rat_int, Rational};
use crate::recoupling::cg;
use crate::reps::{coproduct_rep, Generator, Orientation};
use crate::series::HSeries;
use crate::sqrtext::SqrtExt;

static BERNOULLI: Lazy<RwLock<Vec<Rational>>> = Lazy::new(|| RwLock::new(vec![Rational::one()]));

/// Bernoulli number `B_n` (convention `B_1 = -1/2`), memoized.
pub fn bernoulli_number(n: usize) -> Rational {
    {
        let table = BERNOULLI.read().unwrap();
        if n < table.len() {
            return table[n].clone();
        }
    }
    let mut table = BERNOULLI.write().unwrap();
    while table.len() <= n {
        let m = table.len();
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u32 + 1, k as i64)) * b;
        }
        let value = -acc / Rational::from_integer(binomial(m as u32 + 1, m as i64));
        table.push(value);
    }
    table[n].clone()
}

/// Coefficients of the Bernoulli polynomial `B_n(x)`, index = power of `x`:
/// `B_n(x) = sum_k C(n,k) B_(n-k) x^k`.
pub fn bernoulli_poly(n: usize) -> Vec<Rational> {
    (0..=n)
        .map(|k| {
            Rational::from_integer(binomial(n as u32, k as i64)) * bernoulli_number(n - k)
        })
        .collect()
}

fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// `2^(2k-1) B_(2k) / (k (2k)!)`, the coefficient of `x^(2k)` in
/// `ln(sinh x / x)`.
fn log_sinh_coeff(k: usize) -> Rational {
    let mut c = bernoulli_number(2 * k);
    c *= Rational::from_integer(num_bigint::BigInt::from(2).pow(2 * k as u32 - 1));
    c /= Rational::from_integer((k as i64).into());
    c /= Rational::from_integer(crate::rational::factorial(2 * k as u32));
    c
}

/// Symmetric q-number `[x] = sinh(x h)/sinh(h)` as a series, computed by
/// exponentiating the Bernoulli log-series. Even in `h`; constant term `x`.
pub fn qnum(x: &Rational, order: usize) -> HSeries {
    if x.is_zero() {
        return HSeries::zero(order);
    }
    let mut log = HSeries::zero(order);
    let mut k = 1;
    while 2 * k <= order {
        let x2k = pow_rat(x, 2 * k as u32);
        let coeff = log_sinh_coeff(k) * (x2k - Rational::one());
        log = log + HSeries::monomial(SqrtExt::from_rational(coeff), 2 * k, order);
        k += 1;
    }
    log.exp_nilpotent().expect("log series has zero constant term").scale_rat(x)
}

fn pow_rat(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// q-Pochhammer quotient `[x]_n / (x)_n` as a series in `h`.
///
/// Vanishing classical Pochhammer (x in {0, -1, ..., -(n-1)}) is a domain
/// error, since the quotient then has no series expansion.
pub fn qpochhammer_ratio(x: &Rational, n: u32, order: usize) -> Result<HSeries> {
    for k in 0..n as i64 {
        if *x == rat_int(-k) {
            return Err(Error::ZeroPochhammer {
                x: crate::rational::render_rational(x),
                n,
            });
        }
    }
    if n == 0 {
        return Ok(HSeries::one(order));
    }
    let mut log = HSeries::zero(order);
    let x_plus_n = x + rat_int(n as i64);
    let mut k = 1;
    while 2 * k <= order {
        let bpoly = bernoulli_poly(2 * k + 1);
        let summed = (eval_poly(&bpoly, &x_plus_n) - eval_poly(&bpoly, x))
            / rat_int(2 * k as i64 + 1)
            - rat_int(n as i64);
        let coeff = log_sinh_coeff(k) * summed;
        log = log + HSeries::monomial(SqrtExt::from_rational(coeff), 2 * k, order);
        k += 1;
    }
    log.exp_nilpotent()
}

/// Key identifying one deformed coupling problem.
type CouplingKey = (i64, i64, usize, Orientation);

static COUPLINGS: Lazy<RwLock<HashMap<CouplingKey, Arc<DeformedCoupling>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// The reduction of the deformed tensor representation of `(j1, j2)`:
/// per-weight classical coupling matrices and the deformed coupled vectors
/// expressed in the classical coupled basis.
pub struct DeformedCoupling {
    pub j1: HalfInt,
    pub j2: HalfInt,
    pub order: usize,
    /// Classical CG block per total weight: rows are product states
    /// `(m1, m2)` lex descending, columns coupled `j'` ascending.
    blocks: HashMap<i64, Mat<SqrtExt>>,
    /// Deformed coupled vector of `(j, m)` in classical coupled coordinates
    /// (indexed like the columns of the weight-m block).
    vectors: HashMap<(i64, i64), Vec<HSeries>>,
}

/// Product states of total weight `w`, ordered `m1` descending.
fn product_states(j1: HalfInt, j2: HalfInt, w: i64) -> Vec<(HalfInt, HalfInt)> {
    let mut out = Vec::new();
    for m1 in j1.magnetics_desc() {
        let m2 = HalfInt::from_twice(w - m1.twice());
        if j2.contains(m2) {
            out.push((m1, m2));
        }
    }
    out
}

/// Coupled labels `j'` present at total weight `w`, ascending.
fn coupled_states(j1: HalfInt, j2: HalfInt, w: i64) -> Vec<HalfInt> {
    HalfInt::couplings(j1, j2)
        .filter(|jp| jp.twice() >= w.abs())
        .collect()
}

impl DeformedCoupling {
    /// Reduce the deformed tensor representation of `(j1, j2)` to the given
    /// truncation order.
    pub fn build(
        j1: HalfInt,
        j2: HalfInt,
        order: usize,
        orientation: Orientation,
    ) -> Result<Arc<DeformedCoupling>> {
        let key = (j1.twice(), j2.twice(), order, orientation);
        if let Some(hit) = COUPLINGS.read().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let built = Arc::new(Self::build_uncached(j1, j2, order, orientation)?);
        COUPLINGS.write().unwrap().insert(key, built.clone());
        Ok(built)
    }

    fn build_uncached(
        j1: HalfInt,
        j2: HalfInt,
        order: usize,
        orientation: Orientation,
    ) -> Result<DeformedCoupling> {
        let top = (j1 + j2).twice();
        let e_full = coproduct_rep(j1, j2, Generator::E, true, order, orientation)?;
        let f_full = coproduct_rep(j1, j2, Generator::F, true, order, orientation)?;
        let d2 = j2.dim();
        let product_index =
            |m1: HalfInt, m2: HalfInt| crate::reps::weight_index(j1, m1) * d2 + crate::reps::weight_index(j2, m2);

        // classical CG blocks per weight
        let mut blocks: HashMap<i64, Mat<SqrtExt>> = HashMap::new();
        let mut w = top;
        while w >= -top {
            let prods = product_states(j1, j2, w);
            let coups = coupled_states(j1, j2, w);
            if !prods.is_empty() {
                let mut u = Mat::zeros(prods.len(), coups.len());
                for (r, &(m1, m2)) in prods.iter().enumerate() {
                    for (c, &jp) in coups.iter().enumerate() {
                        *u.at_mut(r, c) = cg(j1, j2, jp, m1, m2, HalfInt::from_twice(w))?;
                    }
                }
                blocks.insert(w, u);
            }
            w -= 2;
        }

        // deformed generator blocks in classical coupled coordinates:
        // me[w] maps weight w -> w+1, mf[w] maps weight w -> w-1
        let coupled_block = |mat: &Mat<HSeries>, w_to: i64, w_from: i64| -> Mat<HSeries> {
            let rows = product_states(j1, j2, w_to);
            let cols = product_states(j1, j2, w_from);
            let mut sl = Mat::zeros_series(rows.len(), cols.len(), order);
            for (r, &(a1, a2)) in rows.iter().enumerate() {
                for (c, &(b1, b2)) in cols.iter().enumerate() {
                    *sl.at_mut(r, c) = mat.at(product_index(a1, a2), product_index(b1, b2)).clone();
                }
            }
            let u_to = blocks[&w_to].lift(order);
            let u_from = blocks[&w_from].lift(order);
            u_to.transpose().mul(&sl).mul(&u_from)
        };

        let mut vectors: HashMap<(i64, i64), Vec<HSeries>> = HashMap::new();
        for j in HalfInt::couplings(j1, j2) {
            // highest-weight vector at w = j, in coupled coordinates
            let w = j.twice();
            let coups = coupled_states(j1, j2, w);
            let self_pos = coups.iter().position(|&c| c == j).expect("j present at its own weight");
            let n = coups.len();
            let mut vec_coeffs: Vec<Vec<SqrtExt>> = vec![vec![SqrtExt::zero(); order + 1]; n];
            vec_coeffs[self_pos][0] = SqrtExt::one();
            if w < top {
                let me = coupled_block(&e_full, w + 2, w);
                // rows of me are coupled states at w+1: exactly those with
                // j'' > j; the order-0 block is diagonal with classical
                // ladder amplitudes, so each h-order solves directly.
                let rows = coupled_states(j1, j2, w + 2);
                for t in 1..=order {
                    for (r, &jpp) in rows.iter().enumerate() {
                        let col = coups.iter().position(|&c| c == jpp).expect("row label in cols");
                        // sum over s >= 1 and all columns
                        let mut acc = SqrtExt::zero();
                        for (c, coeffs) in vec_coeffs.iter().enumerate() {
                            let entry = me.at(r, c);
                            for s in 1..=t {
                                if !entry.coeff(s).is_zero() && !coeffs[t - s].is_zero() {
                                    acc += entry.coeff(s) * &coeffs[t - s];
                                }
                            }
                        }
                        // classical amplitude sqrt((j''-j)(j''+j+1))
                        let amp2 = ((jpp - j).twice() / 2) * ((jpp + j).twice() / 2 + 1);
                        let amp = SqrtExt::sqrt_term(Rational::one(), amp2)?;
                        vec_coeffs[col][t] = -(acc * amp.inverse()?);
                    }
                }
            }
            let mut hw: Vec<HSeries> =
                vec_coeffs.into_iter().map(HSeries::from_coeffs).collect();
            // normalize: the classical coupled basis is orthonormal
            let mut norm2 = HSeries::zero(order);
            for comp in &hw {
                norm2 = &norm2 + &(comp * comp);
            }
            let inv_norm = norm2.sqrt()?.inverse()?;
            for comp in &mut hw {
                *comp = &*comp * &inv_norm;
            }
            vectors.insert((j.twice(), w), hw);

            // lower through the block with the deformed ladder normalization
            let mut m = w;
            while m > -w {
                let mf = coupled_block(&f_full, m - 2, m);
                let prev = &vectors[&(j.twice(), m)];
                let mut next = vec![HSeries::zero(order); coupled_states(j1, j2, m - 2).len()];
                for (r, nx) in next.iter_mut().enumerate() {
                    let mut acc = HSeries::zero(order);
                    for (c, comp) in prev.iter().enumerate() {
                        if !comp.is_zero() {
                            acc = &acc + &(mf.at(r, c) * comp);
                        }
                    }
                    *nx = acc;
                }
                // divide by sqrt([j+m][j-m+1]) at the current m
                let mh = HalfInt::from_twice(m);
                let qa = qnum(&(j + mh).as_rational(), order);
                let qb = qnum(&((j - mh).as_rational() + Rational::one()), order);
                let inv_amp = (&qa * &qb).sqrt()?.inverse()?;
                for nx in next.iter_mut() {
                    *nx = &*nx * &inv_amp;
                }
                vectors.insert((j.twice(), m - 2), next);
                m -= 2;
            }
        }

        Ok(DeformedCoupling { j1, j2, order, blocks, vectors })
    }

    /// Classical CG block at a total weight.
    pub fn classical_block(&self, w: i64) -> &Mat<SqrtExt> {
        &self.blocks[&w]
    }

    /// Hybrid overlap `< j', m | j, m >_h`: the component of the deformed
    /// coupled state on the classical coupled basis.
    pub fn overlap(&self, j_prime: HalfInt, j: HalfInt, m: HalfInt) -> HSeries {
        let zero = HSeries::zero(self.order);
        let Some(vec) = self.vectors.get(&(j.twice(), m.twice())) else {
            return zero;
        };
        let coups = coupled_states(self.j1, self.j2, m.twice());
        match coups.iter().position(|&c| c == j_prime) {
            Some(idx) => vec[idx].clone(),
            None => zero,
        }
    }

    /// q-deformed Clebsch-Gordan coefficient `<j1 m1; j2 m2 | j m>_h`.
    pub fn qcg(&self, j: HalfInt, m1: HalfInt, m2: HalfInt, m: HalfInt) -> HSeries {
        let zero = HSeries::zero(self.order);
        if m1 + m2 != m
            || !self.j1.contains(m1)
            || !self.j2.contains(m2)
            || !HalfInt::triangle(self.j1, self.j2, j)
            || !j.contains(m)
        {
            return zero;
        }
        let w = m.twice();
        let vec = &self.vectors[&(j.twice(), w)];
        let block = &self.blocks[&w];
        let prods = product_states(self.j1, self.j2, w);
        let row = prods.iter().position(|&(a, b)| a == m1 && b == m2).expect("valid product state");
        let mut acc = HSeries::zero(self.order);
        for (c, comp) in vec.iter().enumerate() {
            if !comp.is_zero() && !block.at(row, c).is_zero() {
                acc = &acc + &comp.scale(block.at(row, c));
            }
        }
        acc
    }

    /// The twist block at total weight `w` on the product basis:
    /// `U_w W_w^T U_w^T`, where `W_w` has the deformed coupled vectors as
    /// columns.
    pub fn twist_block(&self, w: i64) -> Mat<HSeries> {
        let coups = coupled_states(self.j1, self.j2, w);
        let n = coups.len();
        let mut wmat = Mat::zeros_series(n, n, self.order);
        for (c, &j) in coups.iter().enumerate() {
            let vec = &self.vectors[&(j.twice(), w)];
            for (r, comp) in vec.iter().enumerate() {
                *wmat.at_mut(r, c) = comp.clone();
            }
        }
        let u = self.blocks[&w].lift(self.order);
        u.mul(&wmat.transpose()).mul(&u.transpose())
    }

    /// Total weights, descending.
    pub fn weights(&self) -> Vec<i64> {
        let top = (self.j1 + self.j2).twice();
        (-top..=top).rev().step_by(2).collect()
    }

    pub fn product_basis(&self, w: i64) -> Vec<(HalfInt, HalfInt)> {
        product_states(self.j1, self.j2, w)
    }

    pub fn coupled_basis(&self, w: i64) -> Vec<HalfInt> {
        coupled_states(self.j1, self.j2, w)
    }
}

/// q-deformed Clebsch-Gordan coefficient in the default orientation.
pub fn qcg(
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m: HalfInt,
    order: usize,
) -> Result<HSeries> {
    let coupling = DeformedCoupling::build(j1, j2, order, Orientation::default())?;
    Ok(coupling.qcg(j, m1, m2, m))
}

/// Hybrid overlap between undeformed and deformed coupled bases:
/// `sum_(m1,m2) CG(j1 j2 j'; m1 m2 m) CGq(j1 j2 j; m1 m2 m)`.
pub fn hybrid_overlap(
    j1: HalfInt,
    j2: HalfInt,
    j_prime: HalfInt,
    j: HalfInt,
    m: HalfInt,
    order: usize,
) -> Result<HSeries> {
    let coupling = DeformedCoupling::build(j1, j2, order, Orientation::default())?;
    Ok(coupling.overlap(j_prime, j, m))
}
