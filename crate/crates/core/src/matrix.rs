//! Small dense matrices over the exact scalar types.

use crate::series::HSeries;
use crate::sqrtext::SqrtExt;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Mat<T> {
    pub fn filled(rows: usize, cols: usize, fill: T) -> Self {
        Mat { rows, cols, data: vec![fill; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut T {
        &mut self.data[r * self.cols + c]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.at(r, c).clone());
            }
        }
        Mat { rows: self.cols, cols: self.rows, data }
    }
}

impl Mat<SqrtExt> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::filled(rows, cols, SqrtExt::zero())
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = SqrtExt::one();
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data =
            self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        *out.at_mut(r, c) += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &SqrtExt) -> Self {
        self.map(|x| x * c)
    }

    /// Kronecker product, row index `(r1, r2) -> r1 * rows2 + r2`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.at(r2, c2);
                        if !b.is_zero() {
                            *out.at_mut(r1 * other.rows + r2, c1 * other.cols + c2) = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// Lift to a series matrix at the given truncation order.
    pub fn lift(&self, order: usize) -> Mat<HSeries> {
        self.map(|x| HSeries::constant(x.clone(), order))
    }
}

impl Mat<HSeries> {
    pub fn zeros_series(rows: usize, cols: usize, order: usize) -> Self {
        Mat::filled(rows, cols, HSeries::zero(order))
    }

    pub fn identity_series(n: usize, order: usize) -> Self {
        let mut m = Mat::zeros_series(n, n, order);
        for i in 0..n {
            *m.at_mut(i, i) = HSeries::one(order);
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let order = self.data[0].order().min(other.data[0].order());
        let mut out = Mat::zeros_series(self.rows, other.cols, order);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if !b.is_zero() {
                        let acc = out.at(r, c) + &(a * b);
                        *out.at_mut(r, c) = acc;
                    }
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let order = self.data[0].order().min(other.data[0].order());
        let mut out = Mat::zeros_series(self.rows * other.rows, self.cols * other.cols, order);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.at(r2, c2);
                        if !b.is_zero() {
                            *out.at_mut(r1 * other.rows + r2, c1 * other.cols + c2) = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// The matrix of `h^k` coefficients.
    pub fn coeff_matrix(&self, k: usize) -> Mat<SqrtExt> {
        self.map(|s| s.coeff(k).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let mut a = Mat::zeros(2, 2);
        *a.at_mut(0, 1) = SqrtExt::from_int(3);
        *a.at_mut(1, 0) = SqrtExt::from_int(-2);
        let i = Mat::identity(2);
        assert_eq!(a.mul(&i), a);
        assert_eq!(i.mul(&a), a);
        assert_eq!(a.transpose().at(1, 0), &SqrtExt::from_int(3));
    }

    #[test]
    fn kron_dims() {
        let a = Mat::identity(2);
        let b = Mat::identity(3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
        assert!(k.sub(&Mat::identity(6)).is_zero());
    }
}
