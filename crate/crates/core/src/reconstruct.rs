//! Reconstruction of elements of U(su2) and U(su2) (x) U(su2) from their
//! irreducible representation matrix elements.
//!
//! The CG orthogonality relation projects out one `(J, M)` coefficient per
//! weight; those per-weight samples are polynomials in `u = (j + 1/2)^2`
//! and exact interpolation recovers the central-element coefficients of the
//! tensor-operator expansion. A held-out sample per shell guards the degree
//! bound, and the top `J` shell must vanish identically or the requested
//! `J_max` was too small.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::matrix::Mat;
use crate::pbw::{casimir_pow, normal_product, PbwElement, TensorSquareElement};
use crate::poly::{interpolate, CentralPoly, Sample};
use crate::rational::{rat, Rational};
use crate::recoupling::cg;
use crate::reps::{rep, rep_tensor_square, weight_index};
use crate::sqrtext::SqrtExt;
use crate::tensorops::{reduced_matrix_element, tensor_op};

/// Provider of single-irrep matrix elements `<j,m'|a|j,m>`.
pub trait MatrixSource {
    fn matrix(&self, j: HalfInt) -> Mat<SqrtExt>;
}

/// Provider of tensor-product matrix elements
/// `<j1,m1'; j2,m2'|a|j1,m1; j2,m2>`.
pub trait TensorMatrixSource {
    fn matrix(&self, j1: HalfInt, j2: HalfInt) -> Mat<SqrtExt>;
}

impl MatrixSource for PbwElement {
    fn matrix(&self, j: HalfInt) -> Mat<SqrtExt> {
        rep(j, self)
    }
}

impl TensorMatrixSource for TensorSquareElement {
    fn matrix(&self, j1: HalfInt, j2: HalfInt) -> Mat<SqrtExt> {
        rep_tensor_square(j1, j2, self)
    }
}

/// Matrix elements supplied directly (e.g. parsed from a file), keyed by
/// twice the weight.
pub struct MapSource(pub BTreeMap<i64, Mat<SqrtExt>>);

impl MatrixSource for MapSource {
    fn matrix(&self, j: HalfInt) -> Mat<SqrtExt> {
        self.0
            .get(&j.twice())
            .unwrap_or_else(|| panic!("no matrix supplied for weight j = {j}"))
            .clone()
    }
}

/// Tensor matrix elements keyed by twice the weight pair.
pub struct TensorMapSource(pub BTreeMap<(i64, i64), Mat<SqrtExt>>);

impl TensorMatrixSource for TensorMapSource {
    fn matrix(&self, j1: HalfInt, j2: HalfInt) -> Mat<SqrtExt> {
        self.0
            .get(&(j1.twice(), j2.twice()))
            .unwrap_or_else(|| panic!("no matrix supplied for weights ({j1}, {j2})"))
            .clone()
    }
}

/// Element of U(su2) (arity 1) or its tensor square (arity 2) expressed in
/// the tensor-operator basis with central-polynomial coefficients in
/// `u = (j + 1/2)^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorBasisElement {
    arity: usize,
    terms: BTreeMap<(u32, i64, u32, i64), CentralPoly>,
}

impl TensorBasisElement {
    pub fn new(arity: usize) -> Self {
        assert!(arity == 1 || arity == 2);
        TensorBasisElement { arity, terms: BTreeMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn set(&mut self, key: (u32, i64, u32, i64), poly: CentralPoly) {
        assert_eq!(poly.vars(), self.arity);
        if self.arity == 1 {
            assert_eq!((key.2, key.3), (0, 0), "arity-1 keys use (J, M, 0, 0)");
        }
        if poly.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, poly);
        }
    }

    pub fn get(&self, key: (u32, i64, u32, i64)) -> Option<&CentralPoly> {
        self.terms.get(&key)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, i64, u32, i64), &CentralPoly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn accumulate(&mut self, key: (u32, i64, u32, i64), poly: &CentralPoly) {
        let merged = match self.terms.get(&key) {
            Some(existing) => existing.add(poly),
            None => poly.clone(),
        };
        self.set(key, merged);
    }

    /// Tensor-factor swap: keys `(J1,M1,J2,M2) -> (J2,M2,J1,M1)` and
    /// coefficient variables `u1 <-> u2`.
    pub fn swap_factors(&self) -> TensorBasisElement {
        assert_eq!(self.arity, 2);
        let mut out = TensorBasisElement::new(2);
        for (&(j1, m1, j2, m2), poly) in &self.terms {
            out.set((j2, m2, j1, m1), poly.swap_vars());
        }
        out
    }

    pub fn scale_rat(&self, r: &Rational) -> TensorBasisElement {
        let mut out = TensorBasisElement::new(self.arity);
        let c = SqrtExt::from_rational(r.clone());
        for (&k, poly) in &self.terms {
            out.set(k, poly.scale(&c));
        }
        out
    }

    pub fn add(&self, other: &TensorBasisElement) -> TensorBasisElement {
        assert_eq!(self.arity, other.arity);
        let mut out = self.clone();
        for (k, poly) in other.terms() {
            out.accumulate(k, poly);
        }
        out
    }
}

/// One coefficient sample `a^J_M(j)` via the CG projection of the matrix
/// elements.
pub fn project_coefficient(
    src: &dyn MatrixSource,
    j_op: u32,
    m_op: i64,
    j: HalfInt,
) -> Result<SqrtExt> {
    let rme = reduced_matrix_element(j_op, j);
    if rme.is_zero() {
        return Err(Error::ZeroReducedElement { j_op, weight: j.to_string() });
    }
    let mat = src.matrix(j);
    project_from_matrix(&mat, j_op, m_op, j, &rme)
}

fn project_from_matrix(
    mat: &Mat<SqrtExt>,
    j_op: u32,
    m_op: i64,
    j: HalfInt,
    rme: &SqrtExt,
) -> Result<SqrtExt> {
    let big = HalfInt::from_int(j_op as i64);
    let mu = HalfInt::from_int(m_op);
    let mut acc = SqrtExt::zero();
    for m in j.magnetics_desc() {
        let mp = m + mu;
        if !j.contains(mp) {
            continue;
        }
        let c = cg(big, j, j, mu, m, mp)?;
        if c.is_zero() {
            continue;
        }
        let entry = mat.at(weight_index(j, mp), weight_index(j, m));
        if !entry.is_zero() {
            acc += &c * entry;
        }
    }
    let norm = rat(2 * j_op as i64 + 1, j.twice() + 1);
    acc.scale(&norm).div(rme)
}

/// Sampling weights for the `J` shell: smallest admissible `j = J/2`
/// upward in half-integer steps.
fn shell_weights(j_op: u32, count: usize) -> Vec<HalfInt> {
    (0..count).map(|t| HalfInt::from_twice(j_op as i64 + t as i64)).collect()
}

fn u_of(j: HalfInt) -> Rational {
    let t = j.twice() + 1;
    rat(t * t, 4)
}

/// Reconstruct an element of U(su2) from its representation matrices.
///
/// Shells `J < j_max` are recovered; the `J = j_max` shell must vanish
/// identically (otherwise `j_max` was chosen too small). Each coefficient
/// polynomial in `u` is fitted on `degree_bound + 1` weights and checked on
/// one held-out weight.
pub fn reconstruct_single(
    src: &dyn MatrixSource,
    j_max: u32,
    degree_bound: usize,
) -> Result<TensorBasisElement> {
    let mut matrices: BTreeMap<i64, Mat<SqrtExt>> = BTreeMap::new();
    let mut out = TensorBasisElement::new(1);
    for j_op in 0..=j_max {
        let weights = shell_weights(j_op, degree_bound + 2);
        for &j in &weights {
            matrices.entry(j.twice()).or_insert_with(|| src.matrix(j));
        }
        for m_op in -(j_op as i64)..=(j_op as i64) {
            let mut samples: Vec<Sample> = Vec::with_capacity(weights.len());
            for &j in &weights {
                let rme = reduced_matrix_element(j_op, j);
                let mat = &matrices[&j.twice()];
                let value = project_from_matrix(mat, j_op, m_op, j, &rme)?;
                samples.push((vec![u_of(j)], value));
            }
            let poly = interpolate(&samples, &[degree_bound])?;
            if !poly.is_zero() {
                if j_op == j_max {
                    return Err(Error::JMaxTooSmall { jmax: j_max });
                }
                out.set((j_op, m_op, 0, 0), poly);
            }
        }
    }
    Ok(out)
}

/// Tensor-square version: bivariate interpolation over a grid of weight
/// pairs, one shell pair `(J1, J2)` at a time.
pub fn reconstruct_tensor(
    src: &dyn TensorMatrixSource,
    j_max: u32,
    degree_bounds: [usize; 2],
) -> Result<TensorBasisElement> {
    let mut matrices: BTreeMap<(i64, i64), Mat<SqrtExt>> = BTreeMap::new();
    let mut out = TensorBasisElement::new(2);
    for j1_op in 0..=j_max {
        for j2_op in 0..=j_max {
            let w1 = shell_weights(j1_op, degree_bounds[0] + 2);
            let w2 = shell_weights(j2_op, degree_bounds[1] + 2);
            for &a in &w1 {
                for &b in &w2 {
                    matrices
                        .entry((a.twice(), b.twice()))
                        .or_insert_with(|| src.matrix(a, b));
                }
            }
            for m1_op in -(j1_op as i64)..=(j1_op as i64) {
                for m2_op in -(j2_op as i64)..=(j2_op as i64) {
                    let mut samples: Vec<Sample> = Vec::new();
                    for &a in &w1 {
                        for &b in &w2 {
                            let mat = &matrices[&(a.twice(), b.twice())];
                            let value = project_tensor_from_matrix(
                                mat, j1_op, m1_op, j2_op, m2_op, a, b,
                            )?;
                            samples.push((vec![u_of(a), u_of(b)], value));
                        }
                    }
                    let poly = interpolate(&samples, &degree_bounds)?;
                    if !poly.is_zero() {
                        if j1_op == j_max || j2_op == j_max {
                            return Err(Error::JMaxTooSmall { jmax: j_max });
                        }
                        out.set((j1_op, m1_op, j2_op, m2_op), poly);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The tensor-product CG projection of one matrix of tensor-square matrix
/// elements, normalized by both reduced matrix elements.
pub fn project_tensor_from_matrix(
    mat: &Mat<SqrtExt>,
    j1_op: u32,
    m1_op: i64,
    j2_op: u32,
    m2_op: i64,
    j1: HalfInt,
    j2: HalfInt,
) -> Result<SqrtExt> {
    let rme1 = reduced_matrix_element(j1_op, j1);
    let rme2 = reduced_matrix_element(j2_op, j2);
    if rme1.is_zero() {
        return Err(Error::ZeroReducedElement { j_op: j1_op, weight: j1.to_string() });
    }
    if rme2.is_zero() {
        return Err(Error::ZeroReducedElement { j_op: j2_op, weight: j2.to_string() });
    }
    let big1 = HalfInt::from_int(j1_op as i64);
    let mu1 = HalfInt::from_int(m1_op);
    let big2 = HalfInt::from_int(j2_op as i64);
    let mu2 = HalfInt::from_int(m2_op);
    let d2 = j2.dim();
    let mut acc = SqrtExt::zero();
    for m1 in j1.magnetics_desc() {
        let m1p = m1 + mu1;
        if !j1.contains(m1p) {
            continue;
        }
        let c1 = cg(big1, j1, j1, mu1, m1, m1p)?;
        if c1.is_zero() {
            continue;
        }
        for m2 in j2.magnetics_desc() {
            let m2p = m2 + mu2;
            if !j2.contains(m2p) {
                continue;
            }
            let entry = mat.at(
                weight_index(j1, m1p) * d2 + weight_index(j2, m2p),
                weight_index(j1, m1) * d2 + weight_index(j2, m2),
            );
            if entry.is_zero() {
                continue;
            }
            let c2 = cg(big2, j2, j2, mu2, m2, m2p)?;
            if !c2.is_zero() {
                acc += &(&c1 * &c2) * entry;
            }
        }
    }
    let norm = rat(
        (2 * j1_op as i64 + 1) * (2 * j2_op as i64 + 1),
        (j1.twice() + 1) * (j2.twice() + 1),
    );
    acc.scale(&norm).div(&(&rme1 * &rme2))
}

/// Expand one factor `(sum_k c_k C^k) T^J_M` into normal-ordered form.
fn factor_to_pbw(j_op: u32, m_op: i64, poly_in_c: &[(u32, SqrtExt)]) -> PbwElement {
    let t = tensor_op(j_op, m_op);
    let mut acc = PbwElement::zero();
    for (k, coeff) in poly_in_c {
        let ck = casimir_pow(*k);
        acc = acc.add(&normal_product(&ck, &t.pbw).scale(coeff));
    }
    acc
}

/// Convert an arity-1 tensor-basis element back to the monomial basis,
/// substituting `u = C + 1/4`.
pub fn to_pbw(t: &TensorBasisElement) -> PbwElement {
    assert_eq!(t.arity(), 1);
    let quarter = rat(1, 4);
    let mut acc = PbwElement::zero();
    for ((j_op, m_op, _, _), poly) in t.terms() {
        let in_c = poly.shift_vars(&quarter);
        let coeffs: Vec<(u32, SqrtExt)> =
            in_c.terms().map(|((k, _), c)| (k, c.clone())).collect();
        acc = acc.add(&factor_to_pbw(j_op, m_op, &coeffs));
    }
    acc
}

/// Arity-2 conversion to the tensor square of the monomial basis.
pub fn to_pbw_tensor(t: &TensorBasisElement) -> TensorSquareElement {
    assert_eq!(t.arity(), 2);
    let quarter = rat(1, 4);
    let mut acc = TensorSquareElement::zero();
    for ((j1_op, m1_op, j2_op, m2_op), poly) in t.terms() {
        let in_c = poly.shift_vars(&quarter);
        for ((k1, k2), c) in in_c.terms() {
            let left = factor_to_pbw(j1_op, m1_op, &[(k1, c.clone())]);
            let right = factor_to_pbw(j2_op, m2_op, &[(k2, SqrtExt::one())]);
            acc = acc.add(&TensorSquareElement::tensor(&left, &right));
        }
    }
    acc
}

impl fmt::Display for TensorBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(j1, m1, j2, m2), poly) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let c_poly = poly.shift_vars(&rat(1, 4));
            let rendered = c_poly.render("C");
            if self.arity == 1 {
                write!(f, "[{rendered}]*T[{j1},{m1}]")?;
            } else {
                write!(f, "[{rendered}]*T[{j1},{m1}]xT[{j2},{m2}]")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbw::casimir;
    use num_traits::One;

    fn h(s: &str) -> HalfInt {
        HalfInt::parse(s).unwrap()
    }

    #[test]
    fn casimir_projects_to_j_j_plus_one() {
        let c = casimir();
        for js in ["0", "1/2", "1", "3/2"] {
            let j = h(js);
            let v = project_coefficient(&c, 0, 0, j).unwrap();
            let expect = j.as_rational() * (j.as_rational() + Rational::one());
            assert_eq!(v, SqrtExt::from_rational(expect));
        }
    }

    #[test]
    fn generator_projections() {
        let e = PbwElement::gen_e();
        // E = 2 T^1_1, so the (1,1) sample is the constant 2
        for js in ["1/2", "1", "2"] {
            let v = project_coefficient(&e, 1, 1, h(js)).unwrap();
            assert_eq!(v, SqrtExt::from_int(2));
            // wrong weight component vanishes
            let z = project_coefficient(&e, 1, 0, h(js)).unwrap();
            assert!(z.is_zero());
        }
        // rme vanishes: domain error
        assert!(matches!(
            project_coefficient(&e, 3, 1, h("1")),
            Err(Error::ZeroReducedElement { .. })
        ));
    }

    #[test]
    fn reconstruct_identity_and_casimir() {
        let one = PbwElement::one();
        let r = reconstruct_single(&one, 2, 1).unwrap();
        assert_eq!(r.num_terms(), 1);
        let p = r.get((0, 0, 0, 0)).unwrap();
        assert_eq!(p.eval(&[rat(17, 3)]), SqrtExt::one());

        let c = casimir();
        let r = reconstruct_single(&c, 2, 2).unwrap();
        assert_eq!(r.num_terms(), 1);
        // coefficient of T^0_0 is u - 1/4
        let p = r.get((0, 0, 0, 0)).unwrap();
        assert_eq!(p.eval(&[rat(1, 4)]), SqrtExt::zero());
        assert_eq!(p.eval(&[rat(5, 4)]), SqrtExt::one());
        assert_eq!(to_pbw(&r), c);
    }

    #[test]
    fn reconstruct_ef_product() {
        // EF = C - H^2/4 + H/2 mixes the (0,0), (1,0) and (2,0) shells
        let ef = normal_product(&PbwElement::gen_e(), &PbwElement::gen_f());
        let r = reconstruct_single(&ef, 3, 2).unwrap();
        assert_eq!(to_pbw(&r), ef);
    }

    #[test]
    fn jmax_detection() {
        // E^2 has a J = 2 component; j_max = 2 puts it in the detection shell
        let e2 = normal_product(&PbwElement::gen_e(), &PbwElement::gen_e());
        assert!(matches!(
            reconstruct_single(&e2, 2, 1),
            Err(Error::JMaxTooSmall { jmax: 2 })
        ));
        let r = reconstruct_single(&e2, 3, 1).unwrap();
        assert_eq!(to_pbw(&r), e2);
    }

    #[test]
    fn tensor_reconstruction_basics() {
        let one = TensorSquareElement::one();
        let r = reconstruct_tensor(&one, 1, [1, 1]).unwrap();
        assert_eq!(r.num_terms(), 1);
        assert_eq!(to_pbw_tensor(&r), one);

        // C (x) 1
        let c1 = TensorSquareElement::tensor(&casimir(), &PbwElement::one());
        let r = reconstruct_tensor(&c1, 1, [2, 1]).unwrap();
        assert_eq!(r.num_terms(), 1);
        assert_eq!(to_pbw_tensor(&r), c1);

        // F (x) E = (-2 T^1_-1) (x) (2 T^1_1): coefficient -4 at (1,-1,1,1)
        let fe = TensorSquareElement::tensor(&PbwElement::gen_f(), &PbwElement::gen_e());
        let r = reconstruct_tensor(&fe, 2, [1, 1]).unwrap();
        assert_eq!(r.num_terms(), 1);
        let p = r.get((1, -1, 1, 1)).unwrap();
        assert_eq!(p.eval(&[rat(9, 4), rat(25, 4)]), SqrtExt::from_int(-4));
        assert_eq!(to_pbw_tensor(&r), fe);
    }

    #[test]
    fn display_in_casimir_variable() {
        let c = casimir();
        let r = reconstruct_single(&c, 1, 2).unwrap();
        assert_eq!(r.to_string(), "[C]*T[0,0]");
    }
}
