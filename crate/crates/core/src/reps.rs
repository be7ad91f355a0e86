//! Irreducible weight-j representations of U(su2), their q-deformed
//! counterparts as series matrices, and tensor-product representations
//! under the undeformed and deformed coproducts.
//!
//! Weight bases are ordered with `m` descending from `j` to `-j`; tensor
//! bases lexicographically by `(m1, m2)` descending, which matches the
//! Kronecker-product index `(i1, i2) -> i1 * dim2 + i2`.

use num_traits::One;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::matrix::Mat;
use crate::pbw::{Monomial, PbwElement, TensorSquareElement};
use crate::qseries::qnum;
use crate::rational::{rat_int, Rational};
use crate::series::HSeries;
use crate::sqrtext::SqrtExt;

/// Generator labels accepted by the deformed representation maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E,
    F,
    H,
    /// `q^(H/2)`, diagonal with entries `exp(m h)`.
    KPlus,
    /// `q^(-H/2)`.
    KMinus,
}

impl Generator {
    pub fn parse(s: &str) -> Result<Generator> {
        match s {
            "E" => Ok(Generator::E),
            "F" => Ok(Generator::F),
            "H" => Ok(Generator::H),
            "q^{H/2}" | "K" | "K+" => Ok(Generator::KPlus),
            "q^{-H/2}" | "K-" => Ok(Generator::KMinus),
            other => Err(Error::UnknownGenerator(other.to_string())),
        }
    }
}

/// Orientation of the Drinfeld-Jimbo coproduct on the ladder generators.
///
/// `KPlusRight` is the symmetric convention
/// `D(E) = E (x) q^(H/2) + q^(-H/2) (x) E` (same pattern for F);
/// `KPlusLeft` is its tensor flip. The default reproduces the known
/// first-order twist; the twist tests pin this down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    #[default]
    KPlusRight,
    KPlusLeft,
}

impl Orientation {
    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::KPlusRight => Orientation::KPlusLeft,
            Orientation::KPlusLeft => Orientation::KPlusRight,
        }
    }
}

/// Index of the magnetic label `m` in the descending weight basis of `j`.
pub fn weight_index(j: HalfInt, m: HalfInt) -> usize {
    assert!(j.contains(m), "m = {m} is not a weight of j = {j}");
    ((j.twice() - m.twice()) / 2) as usize
}

/// Magnetic label at a basis index.
pub fn index_weight(j: HalfInt, idx: usize) -> HalfInt {
    HalfInt::from_twice(j.twice() - 2 * idx as i64)
}

/// Matrix of a PBW element in the weight-j representation.
///
/// A monomial `E^a H^b F^c` sends `|j,m>` to a single basis vector with an
/// exact single-radicand coefficient, so columns are assembled directly.
pub fn rep(j: HalfInt, x: &PbwElement) -> Mat<SqrtExt> {
    let dim = j.dim();
    let mut out = Mat::zeros(dim, dim);
    for (mono, coeff) in x.terms() {
        for m in j.magnetics_desc() {
            if let Some((target, factor)) = monomial_action(j, m, mono) {
                let entry = &factor * coeff;
                let r = weight_index(j, target);
                let c = weight_index(j, m);
                *out.at_mut(r, c) += entry;
            }
        }
    }
    out
}

/// `E^a H^b F^c |j,m>`: target label and exact coefficient, if nonzero.
fn monomial_action(j: HalfInt, m: HalfInt, mono: Monomial) -> Option<(HalfInt, SqrtExt)> {
    let (a, b, c) = mono;
    let tj = j.twice();
    let mut radicand: i128 = 1;
    // F^c first: each step m -> m-1 carries sqrt((j+m)(j-m+1))
    let mut tm = m.twice();
    for _ in 0..c {
        let p = ((tj + tm) / 2) as i128 * ((tj - tm) / 2 + 1) as i128;
        if p == 0 {
            return None;
        }
        radicand *= p;
        tm -= 2;
    }
    // H^b on the intermediate weight
    let mut h_factor = Rational::one();
    for _ in 0..b {
        h_factor *= rat_int(tm);
    }
    // E^a: each step m -> m+1 carries sqrt((j+m+1)(j-m))
    for _ in 0..a {
        let p = ((tj + tm) / 2 + 1) as i128 * ((tj - tm) / 2) as i128;
        if p == 0 {
            return None;
        }
        radicand *= p;
        tm += 2;
    }
    if num_traits::Zero::is_zero(&h_factor) {
        return None;
    }
    let target = HalfInt::from_twice(tm);
    debug_assert!(j.contains(target));
    let root = SqrtExt::sqrt_term(Rational::one(), radicand as i64).ok()?;
    Some((target, root.scale(&h_factor)))
}

/// Classical matrix of a single generator.
pub fn rep_generator(j: HalfInt, g: Generator) -> Result<Mat<SqrtExt>> {
    match g {
        Generator::E => Ok(rep(j, &PbwElement::gen_e())),
        Generator::F => Ok(rep(j, &PbwElement::gen_f())),
        Generator::H => Ok(rep(j, &PbwElement::gen_h())),
        Generator::KPlus | Generator::KMinus => {
            Err(Error::UnknownGenerator("q^{H/2} has no classical matrix".into()))
        }
    }
}

/// Series matrix of a deformed generator in the weight-j representation.
///
/// `H` is undeformed (diagonal `2m`); `q^(H/2)` is diagonal `exp(m h)`;
/// the ladder entries use symmetric q-numbers,
/// `E |j,m> = sqrt([j-m][j+m+1]) |j,m+1>` and
/// `F |j,m> = sqrt([j+m][j-m+1]) |j,m-1>`.
pub fn rep_deformed_generator(j: HalfInt, g: Generator, order: usize) -> Mat<HSeries> {
    let dim = j.dim();
    let mut out = Mat::zeros_series(dim, dim, order);
    match g {
        Generator::H => {
            for m in j.magnetics_desc() {
                let i = weight_index(j, m);
                *out.at_mut(i, i) =
                    HSeries::constant(SqrtExt::from_int(m.twice()), order);
            }
        }
        Generator::KPlus | Generator::KMinus => {
            let sign = if g == Generator::KPlus { 1 } else { -1 };
            for m in j.magnetics_desc() {
                let i = weight_index(j, m);
                let exponent = m.as_rational() * rat_int(sign);
                *out.at_mut(i, i) = HSeries::exp_linear(&exponent, order);
            }
        }
        Generator::E => {
            for m in j.magnetics_desc() {
                if m == j {
                    continue;
                }
                let up = m + HalfInt::from_int(1);
                let amp = deformed_ladder_amplitude(j - m, j + m + HalfInt::from_int(1), order);
                *out.at_mut(weight_index(j, up), weight_index(j, m)) = amp;
            }
        }
        Generator::F => {
            for m in j.magnetics_desc() {
                if m == -j {
                    continue;
                }
                let down = m - HalfInt::from_int(1);
                let amp = deformed_ladder_amplitude(j + m, j - m + HalfInt::from_int(1), order);
                *out.at_mut(weight_index(j, down), weight_index(j, m)) = amp;
            }
        }
    }
    out
}

/// `sqrt([x][y])` for non-negative integers `x`, `y` (as half-int labels).
fn deformed_ladder_amplitude(x: HalfInt, y: HalfInt, order: usize) -> HSeries {
    let qx = qnum(&x.as_rational(), order);
    let qy = qnum(&y.as_rational(), order);
    (&qx * &qy).sqrt().expect("q-number product has a positive rational constant term")
}

/// Tensor-product representation of a generator under the undeformed or
/// deformed coproduct.
///
/// Undeformed: `D(g) = g (x) 1 + 1 (x) g` with classical matrices.
/// Deformed (`KLeft`): `D(E) = E (x) q^(-H/2) + q^(H/2) (x) E`, same for
/// `F`, while `D(H) = H (x) 1 + 1 (x) H` stays classical.
pub fn coproduct_rep(
    j1: HalfInt,
    j2: HalfInt,
    g: Generator,
    deformed: bool,
    order: usize,
    orientation: Orientation,
) -> Result<Mat<HSeries>> {
    let d1 = j1.dim();
    let d2 = j2.dim();
    if !deformed {
        let a = rep_generator(j1, g)?.lift(order);
        let b = rep_generator(j2, g)?.lift(order);
        let id1 = Mat::identity_series(d1, order);
        let id2 = Mat::identity_series(d2, order);
        return Ok(a.kron(&id2).add(&id1.kron(&b)));
    }
    match g {
        Generator::H => coproduct_rep(j1, j2, g, false, order, orientation),
        Generator::KPlus | Generator::KMinus => {
            // group-like: q^(H/2) (x) q^(H/2)
            let a = rep_deformed_generator(j1, g, order);
            let b = rep_deformed_generator(j2, g, order);
            Ok(a.kron(&b))
        }
        Generator::E | Generator::F => {
            let (left_k, right_k) = match orientation {
                Orientation::KPlusRight => (Generator::KMinus, Generator::KPlus),
                Orientation::KPlusLeft => (Generator::KPlus, Generator::KMinus),
            };
            let g1 = rep_deformed_generator(j1, g, order);
            let g2 = rep_deformed_generator(j2, g, order);
            let k1 = rep_deformed_generator(j1, left_k, order);
            let k2 = rep_deformed_generator(j2, right_k, order);
            Ok(g1.kron(&k2).add(&k1.kron(&g2)))
        }
    }
}

/// Matrix of an element of U(su2) (x) U(su2) on the tensor basis of
/// `(j1, j2)`.
pub fn rep_tensor_square(j1: HalfInt, j2: HalfInt, x: &TensorSquareElement) -> Mat<SqrtExt> {
    let d1 = j1.dim();
    let d2 = j2.dim();
    let mut out = Mat::zeros(d1 * d2, d1 * d2);
    for ((m1, m2), coeff) in x.terms() {
        let a = rep(j1, &PbwElement::monomial(m1, SqrtExt::one()));
        let b = rep(j2, &PbwElement::monomial(m2, SqrtExt::one()));
        out = out.add(&a.kron(&b).scale(coeff));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::{casimir, normal_product};
    use crate::rational::rat;

    fn h(s: &str) -> HalfInt {
        HalfInt::parse(s).unwrap()
    }

    #[test]
    fn spin_half_generators() {
        let j = h("1/2");
        let hm = rep(j, &PbwElement::gen_h());
        assert_eq!(hm.at(0, 0), &SqrtExt::from_int(1));
        assert_eq!(hm.at(1, 1), &SqrtExt::from_int(-1));
        let em = rep(j, &PbwElement::gen_e());
        assert_eq!(em.at(0, 1), &SqrtExt::one());
        assert_eq!(em.at(1, 0), &SqrtExt::zero());
    }

    #[test]
    fn casimir_acts_as_j_j_plus_one() {
        for js in ["0", "1/2", "1", "3/2", "2", "5/2"] {
            let j = h(js);
            let c = rep(j, &casimir());
            let expected = j.as_rational() * (j.as_rational() + Rational::one());
            for r in 0..j.dim() {
                for cidx in 0..j.dim() {
                    let want = if r == cidx {
                        SqrtExt::from_rational(expected.clone())
                    } else {
                        SqrtExt::zero()
                    };
                    assert_eq!(c.at(r, cidx), &want, "j = {j}");
                }
            }
        }
    }

    #[test]
    fn rep_is_homomorphism() {
        let j = h("3/2");
        let x = normal_product(&PbwElement::gen_e(), &PbwElement::gen_f());
        let y = normal_product(&PbwElement::gen_h(), &PbwElement::gen_e());
        let lhs = rep(j, &normal_product(&x, &y));
        let rhs = rep(j, &x).mul(&rep(j, &y));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn unitarity_e_transpose_is_f() {
        for js in ["1/2", "1", "5/2"] {
            let j = h(js);
            let e = rep(j, &PbwElement::gen_e());
            let f = rep(j, &PbwElement::gen_f());
            assert!(e.transpose().sub(&f).is_zero());
        }
    }

    #[test]
    fn deformed_relations() {
        let order = 4;
        for js in ["1/2", "1", "3/2"] {
            let j = h(js);
            let e = rep_deformed_generator(j, Generator::E, order);
            let f = rep_deformed_generator(j, Generator::F, order);
            let kp = rep_deformed_generator(j, Generator::KPlus, order);
            let km = rep_deformed_generator(j, Generator::KMinus, order);
            // [E,F] acts as the symmetric q-number [2m] on |j,m>
            let comm = e.mul(&f).sub(&f.mul(&e));
            for m in j.magnetics_desc() {
                let i = weight_index(j, m);
                let want = qnum(&Rational::from_integer(m.twice().into()), order);
                assert!((comm.at(i, i) - &want).is_zero(), "j={j} m={m}");
            }
            // q^{H/2} E q^{-H/2} = e^h E
            let conj = kp.mul(&e).mul(&km);
            let scaled = e.map(|s| s * &HSeries::exp_linear(&Rational::one(), order));
            assert!(conj.sub(&scaled).is_zero());
            // deformed E at spin 1/2 is classical ([1] = 1)
            if js == "1/2" {
                let classical = rep(j, &PbwElement::gen_e()).lift(order);
                assert!(e.sub(&classical).is_zero());
            }
        }
    }

    #[test]
    fn deformed_entry_spin_one() {
        // <1,0| E |1,-1> = sqrt([2][1]) = sqrt(2) (1 + h^2/4) + O(h^4)
        let e = rep_deformed_generator(h("1"), Generator::E, 2);
        let entry = e.at(1, 2);
        let sqrt2 = SqrtExt::sqrt_term(Rational::one(), 2).unwrap();
        assert_eq!(entry.coeff(0), &sqrt2);
        assert_eq!(entry.coeff(1), &SqrtExt::zero());
        assert_eq!(entry.coeff(2), &sqrt2.scale(&rat(1, 4)));
    }

    #[test]
    fn coproduct_half_half() {
        let j = h("1/2");
        let undef = coproduct_rep(j, j, Generator::E, false, 0, Orientation::default()).unwrap();
        // ones at ((uu),(ud)), ((uu),(du)), ((ud),(dd)), ((du),(dd))
        let one = HSeries::one(0);
        assert_eq!(undef.at(0, 1), &one);
        assert_eq!(undef.at(0, 2), &one);
        assert_eq!(undef.at(1, 3), &one);
        assert_eq!(undef.at(2, 3), &one);
        // deformed at order 0 equals undeformed for every generator
        for g in [Generator::E, Generator::F, Generator::H] {
            for orientation in [Orientation::KPlusRight, Orientation::KPlusLeft] {
                let d = coproduct_rep(j, h("1"), g, true, 3, orientation).unwrap();
                let u = coproduct_rep(j, h("1"), g, false, 3, orientation).unwrap();
                assert!(d.coeff_matrix(0).sub(&u.coeff_matrix(0)).is_zero());
            }
        }
        // Delta(H) is undeformed exactly
        let dh = coproduct_rep(j, j, Generator::H, true, 3, Orientation::default()).unwrap();
        let uh = coproduct_rep(j, j, Generator::H, false, 3, Orientation::default()).unwrap();
        assert!(dh.sub(&uh).is_zero());
    }
}
