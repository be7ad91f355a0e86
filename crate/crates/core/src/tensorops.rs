//! The minimal tensor-operator basis `T^J_M` of U(su2): normalization,
//! reduced matrix elements, the closed normal-ordered form, and the
//! summation identities used to derive it.

use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::sync::RwLock;

use crate::error::Result;
use crate::half::HalfInt;
use crate::matrix::Mat;
use crate::pbw::{adjoint_pow, PbwElement};
use crate::rational::{
    binomial, factorial, pochhammer, rat_int, recip_factorial, Rational, SqrtRatio,
};
use crate::recoupling::cg;
use crate::reps::rep;
use crate::sqrtext::SqrtExt;

/// A tensor operator `T^J_M` together with its normal-ordered form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorOperator {
    pub j_op: u32,
    pub m_op: i64,
    pub pbw: PbwElement,
}

/// Normalization constant `alpha(J) = sqrt((2J+1)!/((3J+1)! J!))` fixing
/// the reduced matrix element of `T^J` on the weight-J representation to 1.
pub fn alpha(j_op: u32) -> SqrtExt {
    SqrtExt::sqrt_of(
        &SqrtRatio::one().fact(2 * j_op + 1, 1).fact(3 * j_op + 1, -1).fact(j_op, -1),
    )
    .expect("alpha radicand is positive")
}

/// Reduced matrix element `<<j || T^J || j>>`, zero when `J > 2j` (the
/// operator annihilates representations too small to support it).
pub fn reduced_matrix_element(j_op: u32, j: HalfInt) -> SqrtExt {
    let tj = j.twice();
    if tj < j_op as i64 {
        return SqrtExt::zero();
    }
    let ratio = SqrtRatio::one()
        .int(2 * j_op as i64 + 1, 1)
        .fact((tj + j_op as i64 + 1) as u32, 1)
        .fact(j_op, 1)
        .int(tj + 1, -1)
        .fact(3 * j_op + 1, -1)
        .fact((tj - j_op as i64) as u32, -1);
    SqrtExt::sqrt_of(&ratio).expect("reduced matrix element radicand is positive")
}

/// The tensor operator `T^J_M` in normal-ordered form, from the closed
/// two-branch expansion with the algebra-valued binomial in `H` expanded
/// directly as a polynomial.
pub fn tensor_op(j_op: u32, m_op: i64) -> TensorOperator {
    assert!(m_op.unsigned_abs() <= j_op as u64, "|M| <= J required");
    static CACHE: Lazy<RwLock<HashMap<(u32, i64), TensorOperator>>> =
        Lazy::new(|| RwLock::new(HashMap::new()));
    if let Some(hit) = CACHE.read().unwrap().get(&(j_op, m_op)) {
        return hit.clone();
    }
    let jj = j_op as i64;
    // common prefactor (-1)^(J+M) sqrt((2J+1) J! (J-M)! (J+M)! / (3J+1)!)
    let root = SqrtExt::sqrt_of(
        &SqrtRatio::one()
            .int(2 * jj + 1, 1)
            .fact(j_op, 1)
            .fact((jj - m_op) as u32, 1)
            .fact((jj + m_op) as u32, 1)
            .fact(3 * j_op + 1, -1),
    )
    .expect("positive radicand");
    // Sign (-1)^(J+M) for M >= 0 and (-1)^J for M < 0; the latter is what
    // the lowering-operator orbit of `alpha E^J` actually produces, and the
    // defining covariance plus Wigner-Eckart with Condon-Shortley
    // coefficients admit no other choice (see the ladder cross-check test).
    let sign_exp = if m_op >= 0 { jj + m_op } else { jj };
    let sign = if sign_exp.rem_euclid(2) == 0 { 1 } else { -1 };
    let prefactor = root.scale(&rat_int(sign));

    // Both branches of the closed form collapse onto |M|: the binomial
    // argument is J - |M| - 2p and the larger ladder power sits on the
    // E side for M >= 0, on the F side for M < 0.
    let abs_m = m_op.abs();
    let mut pbw = PbwElement::zero();
    for p in 0..=(jj - abs_m) / 2 {
        let k = jj - abs_m - 2 * p;
        let coeff = recip_factorial(p) * recip_factorial(p + abs_m);
        let coeff = if p % 2 == 0 { coeff } else { -coeff };
        let hpoly = binomial_in_h(jj, k as u32);
        let (e_pow, f_pow) = if m_op >= 0 {
            ((p + abs_m) as u32, p as u32)
        } else {
            (p as u32, (p + abs_m) as u32)
        };
        for (deg, c) in hpoly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let total = &coeff * c;
            if !total.is_zero() {
                let term = PbwElement::monomial(
                    (e_pow, deg as u32, f_pow),
                    prefactor.scale(&total),
                );
                pbw = pbw.add(&term);
            }
        }
    }
    let op = TensorOperator { j_op, m_op, pbw };
    CACHE.write().unwrap().insert((j_op, m_op), op.clone());
    op
}

/// Coefficients of `binom(J + H - 1, k) = (J+H-1)(J+H-2)...(J+H-k)/k!`
/// as a polynomial in `H`.
fn binomial_in_h(j_op: i64, k: u32) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for i in 0..k as i64 {
        // multiply by (H + j_op - 1 - i)
        let shift = rat_int(j_op - 1 - i);
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (d, c) in out.iter().enumerate() {
            next[d + 1] += c;
            next[d] += c * &shift;
        }
        out = next;
    }
    let kfac = Rational::from_integer(factorial(k));
    out.into_iter().map(|c| c / &kfac).collect()
}

/// Ladder form of the tensor operator: the normalized
/// `(ad F)^(J-M)` orbit of `alpha E^J`. Kept as an independent route for
/// cross-checks against the closed form.
pub fn tensor_op_ladder(j_op: u32, m_op: i64) -> PbwElement {
    let jj = j_op as i64;
    assert!(m_op.unsigned_abs() <= j_op as u64);
    let norm = SqrtExt::sqrt_of(
        &SqrtRatio::one()
            .int(2 * jj + 1, 1)
            .fact((jj + m_op) as u32, 1)
            .fact(3 * j_op + 1, -1)
            .fact(j_op, -1)
            .fact((jj - m_op) as u32, -1),
    )
    .expect("positive radicand");
    let top = PbwElement::monomial((j_op, 0, 0), SqrtExt::one());
    let lowered = adjoint_pow(&PbwElement::gen_f(), (jj - m_op) as u32, &top);
    lowered.scale(&norm)
}

/// `rep(j, T^J_M)` minus its Wigner-Eckart factorization
/// `<<j||T^J||j>> * CG(J j j; M m m')`; exactly zero for all valid labels.
pub fn wigner_eckart_residual(j_op: u32, m_op: i64, j: HalfInt) -> Result<Mat<SqrtExt>> {
    let t = tensor_op(j_op, m_op);
    let lhs = rep(j, &t.pbw);
    let rme = reduced_matrix_element(j_op, j);
    let dim = j.dim();
    let mut rhs = Mat::zeros(dim, dim);
    if !rme.is_zero() {
        let big = HalfInt::from_int(j_op as i64);
        let mu = HalfInt::from_int(m_op);
        for m in j.magnetics_desc() {
            for mp in j.magnetics_desc() {
                let c = cg(big, j, j, mu, m, mp)?;
                if !c.is_zero() {
                    *rhs.at_mut(crate::reps::weight_index(j, mp), crate::reps::weight_index(j, m)) =
                        &c * &rme;
                }
            }
        }
    }
    Ok(lhs.sub(&rhs))
}

/// Difference of the two sides of the Pfaff-Saalschütz style summation
/// `(a-c)_n (b-c)_n = sum_p C(n,p) (-c)_(n-p) (a+b-c+p)_(n-p) (a)_p (b)_p`.
pub fn saalschuetz_residual(a: &Rational, b: &Rational, c: &Rational, n: u32) -> Rational {
    let lhs = pochhammer(&(a - c), n) * pochhammer(&(b - c), n);
    let mut rhs = Rational::zero();
    for p in 0..=n {
        let term = Rational::from_integer(binomial(n, p as i64))
            * pochhammer(&(-c.clone()), n - p)
            * pochhammer(&(a + b - c + rat_int(p as i64)), n - p)
            * pochhammer(a, p)
            * pochhammer(b, p);
        rhs += term;
    }
    lhs - rhs
}

/// Difference of the two sides of the Vandermonde-style summation
/// `sum_k (-1)^k C(n,k) (-k)_q (-k-x)_q = n! C(q, n-q) (-x-q)_(2q-n)`,
/// defined for `2q >= n`. (The overall sign collapses: an apparent
/// `(-1)^n` on the right cancels against the parity of the shortened
/// Pochhammer; the form here is the one that holds identically, checked by
/// full enumeration in the tests.)
pub fn vandermonde_residual(n: u32, q: u32, x: &Rational) -> Rational {
    assert!(2 * q >= n, "identity requires 2q >= n");
    let mut lhs = Rational::zero();
    for k in 0..=n {
        let term = Rational::from_integer(binomial(n, k as i64))
            * pochhammer(&rat_int(-(k as i64)), q)
            * pochhammer(&(rat_int(-(k as i64)) - x), q);
        if k % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    let rhs = Rational::from_integer(factorial(n) * binomial(q, (n as i64) - (q as i64)))
        * pochhammer(&(-x - rat_int(q as i64)), 2 * q - n);
    lhs - rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::{adjoint, casimir, normal_product};
    use crate::rational::rat;
    use crate::reps::rep_generator;
    use crate::reps::Generator;

    fn h(s: &str) -> HalfInt {
        HalfInt::parse(s).unwrap()
    }

    #[test]
    fn alpha_values() {
        assert!(alpha(0).is_one());
        assert_eq!(alpha(1), SqrtExt::from_rational(rat(1, 2)));
        // alpha(2) = sqrt(5!/(7! 2!)) = sqrt(1/84) = sqrt(21)/42
        assert_eq!(alpha(2), SqrtExt::sqrt_term(rat(1, 42), 21).unwrap());
    }

    #[test]
    fn reduced_matrix_element_values() {
        // normalization point: <<J||T^J||J>> = 1
        for j_op in 0..=4u32 {
            let j = HalfInt::from_int(j_op as i64);
            assert!(reduced_matrix_element(j_op, j).is_one(), "J = {j_op}");
        }
        // <<1/2||T^1||1/2>> = sqrt(3/8)
        assert_eq!(
            reduced_matrix_element(1, h("1/2")),
            SqrtExt::sqrt_rational(&rat(3, 8)).unwrap()
        );
        // J > 2j annihilates
        assert!(reduced_matrix_element(3, h("1")).is_zero());
    }

    #[test]
    fn small_tensor_ops() {
        assert_eq!(tensor_op(0, 0).pbw, PbwElement::one());
        // T^1_1 = E/2
        assert_eq!(
            tensor_op(1, 1).pbw,
            PbwElement::gen_e().scale(&SqrtExt::from_rational(rat(1, 2)))
        );
        // T^1_-1 = -F/2 (the lowering orbit of E/2 picks up one sign)
        assert_eq!(
            tensor_op(1, -1).pbw,
            PbwElement::gen_f().scale(&SqrtExt::from_rational(rat(-1, 2)))
        );
        // T^1_0 = -H/(2 sqrt(2)) = -(sqrt(2)/4) H
        assert_eq!(
            tensor_op(1, 0).pbw,
            PbwElement::gen_h().scale(&SqrtExt::sqrt_term(rat(-1, 4), 2).unwrap())
        );
    }

    #[test]
    fn weight_and_highest_weight_conditions() {
        for j_op in 0..=4u32 {
            for m_op in -(j_op as i64)..=(j_op as i64) {
                let t = tensor_op(j_op, m_op);
                // [H, T] = 2M T
                let comm = adjoint(&PbwElement::gen_h(), &t.pbw);
                assert_eq!(comm, t.pbw.scale(&SqrtExt::from_int(2 * m_op)), "weight of T^{j_op}_{m_op}");
            }
            // [E, T^J_J] = 0
            let top = tensor_op(j_op, j_op as i64);
            assert!(adjoint(&PbwElement::gen_e(), &top.pbw).is_zero());
            // T^J_J = alpha E^J
            assert_eq!(
                top.pbw,
                PbwElement::monomial((j_op, 0, 0), alpha(j_op))
            );
        }
    }

    #[test]
    fn covariance_against_representation_matrices() {
        // [g, T^J_M] = sum_M' T^J_M' <J M'|g|J M> for the three generators
        for j_op in 1..=3u32 {
            let jh = HalfInt::from_int(j_op as i64);
            for g in [Generator::E, Generator::H, Generator::F] {
                let gmat = rep_generator(jh, g).unwrap();
                let gp = match g {
                    Generator::E => PbwElement::gen_e(),
                    Generator::H => PbwElement::gen_h(),
                    Generator::F => PbwElement::gen_f(),
                    _ => unreachable!(),
                };
                for m_op in -(j_op as i64)..=(j_op as i64) {
                    let t = tensor_op(j_op, m_op);
                    let lhs = adjoint(&gp, &t.pbw);
                    let mcol = crate::reps::weight_index(jh, HalfInt::from_int(m_op));
                    let mut rhs = PbwElement::zero();
                    for mp in -(j_op as i64)..=(j_op as i64) {
                        let mrow = crate::reps::weight_index(jh, HalfInt::from_int(mp));
                        let entry = gmat.at(mrow, mcol);
                        if !entry.is_zero() {
                            rhs = rhs.add(&tensor_op(j_op, mp).pbw.scale(entry));
                        }
                    }
                    assert_eq!(lhs, rhs, "covariance J={j_op} M={m_op} g={g:?}");
                }
            }
        }
    }

    #[test]
    fn ladder_route_matches_closed_form() {
        for j_op in 0..=3u32 {
            for m_op in -(j_op as i64)..=(j_op as i64) {
                assert_eq!(
                    tensor_op(j_op, m_op).pbw,
                    tensor_op_ladder(j_op, m_op),
                    "J={j_op} M={m_op}"
                );
            }
        }
    }

    #[test]
    fn highest_entry_matches_power_formula() {
        // rep(j, T^J_J) at (m', m) = (j, j-J) equals alpha sqrt((2j)! J!/(2j-J)!)
        for (j_op, js) in [(1u32, "1"), (2, "3/2"), (2, "2"), (3, "2")] {
            let j = h(js);
            let t = tensor_op(j_op, j_op as i64);
            let m = rep(j, &t.pbw);
            let want = alpha(j_op)
                * SqrtExt::sqrt_of(
                    &SqrtRatio::one()
                        .fact(j.twice() as u32, 1)
                        .fact(j_op, 1)
                        .fact((j.twice() - j_op as i64) as u32, -1),
                )
                .unwrap();
            let row = crate::reps::weight_index(j, j);
            let col = crate::reps::weight_index(j, j - HalfInt::from_int(j_op as i64));
            assert_eq!(m.at(row, col), &want);
        }
    }

    #[test]
    fn wigner_eckart_zero_residuals() {
        for (j_op, m_op, js) in [(1u32, 1i64, "1/2"), (2, 0, "1"), (3, -2, "1/2"), (2, -1, "3/2")] {
            let r = wigner_eckart_residual(j_op, m_op, h(js)).unwrap();
            assert!(r.is_zero(), "J={j_op} M={m_op} j={js}");
        }
    }

    #[test]
    fn transpose_sign_pattern() {
        // rep(j, T^J_-M) = (-1)^M rep(j, T^J_M)^T, checked rather than assumed
        for j_op in 1..=3u32 {
            for m_op in 0..=(j_op as i64) {
                for js in ["1", "3/2", "2"] {
                    let j = h(js);
                    let plus = rep(j, &tensor_op(j_op, m_op).pbw);
                    let minus = rep(j, &tensor_op(j_op, -m_op).pbw);
                    let sign = if m_op % 2 == 0 { 1 } else { -1 };
                    assert!(
                        minus.sub(&plus.transpose().scale(&SqrtExt::from_int(sign))).is_zero(),
                        "J={j_op} M={m_op} j={js}"
                    );
                }
            }
        }
    }

    #[test]
    fn casimir_times_tensor_stays_covariant() {
        let t = tensor_op(2, 1);
        let ct = normal_product(&casimir(), &t.pbw);
        let comm = adjoint(&PbwElement::gen_h(), &ct);
        assert_eq!(comm, ct.scale(&SqrtExt::from_int(2)));
    }

    #[test]
    fn summation_identities() {
        // n = 0 trivially zero
        assert!(saalschuetz_residual(&rat(1, 3), &rat(2, 5), &rat(1, 7), 0).is_zero());
        for n in 1..=5u32 {
            assert!(saalschuetz_residual(&rat(1, 3), &rat(-2, 5), &rat(3, 7), n).is_zero());
            assert!(saalschuetz_residual(&rat(5, 2), &rat(1, 2), &rat(-4, 3), n).is_zero());
        }
        for (n, q) in [(2u32, 1u32), (2, 2), (3, 2), (4, 3), (1, 3)] {
            assert!(vandermonde_residual(n, q, &rat(2, 3)).is_zero(), "n={n} q={q}");
            assert!(vandermonde_residual(n, q, &rat(-7, 5)).is_zero(), "n={n} q={q}");
        }
    }

    #[test]
    fn stirling_expansion_of_binomial() {
        // binom(J+H-1, q) coefficient of H^n equals
        // sum_k binom(J-1, q-k) s(k, n) / k!  (signed Stirling numbers)
        let stirling = |k: usize, n: usize| -> Rational {
            // x(x-1)...(x-k+1) = sum_n s(k,n) x^n
            let mut poly = vec![Rational::one()];
            for i in 0..k as i64 {
                let mut next = vec![Rational::zero(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * rat_int(i);
                }
                poly = next;
            }
            poly.get(n).cloned().unwrap_or_else(Rational::zero)
        };
        for (j_op, q) in [(2i64, 2u32), (3, 1), (3, 3), (4, 2)] {
            let direct = binomial_in_h(j_op, q);
            for (n, c) in direct.iter().enumerate() {
                let mut acc = Rational::zero();
                for k in n..=(q as usize) {
                    acc += Rational::from_integer(binomial(
                        (j_op - 1) as u32,
                        q as i64 - k as i64,
                    )) * stirling(k, n)
                        * recip_factorial(k as i64);
                }
                assert_eq!(c, &acc, "J={j_op} q={q} H^{n}");
            }
        }
    }
}
