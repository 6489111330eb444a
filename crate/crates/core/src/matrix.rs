//! Small dense complex matrices.
//!
//! [`SquareMatrix`] is the fixed-size form used for gate matrices; [`Matrix`]
//! is the heap-allocated form used for whole-register unitaries.

use std::ops::Mul;

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquareMatrix<const D: usize>(pub [[C64; D]; D]);

pub type Unitary2 = SquareMatrix<2>;
pub type Unitary4 = SquareMatrix<4>;

impl<const D: usize> SquareMatrix<D> {
    pub fn identity() -> Self {
        let mut m = [[ZERO; D]; D];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = ONE;
        }
        Self(m)
    }

    pub fn diagonal(entries: [C64; D]) -> Self {
        let mut m = [[ZERO; D]; D];
        for (i, e) in entries.into_iter().enumerate() {
            m[i][i] = e;
        }
        Self(m)
    }

    pub fn adjoint(&self) -> Self {
        let mut m = [[ZERO; D]; D];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[j][i].conj();
            }
        }
        Self(m)
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = self.0;
        for e in m.iter_mut().flatten() {
            *e *= s;
        }
        Self(m)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self.adjoint() * *self).max_abs_diff(&Self::identity()) <= tol
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix {
            dim: D,
            data: self.0.iter().flatten().copied().collect(),
        }
    }
}

impl<const D: usize> Mul for SquareMatrix<D> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut m = [[ZERO; D]; D];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = (0..D).map(|k| self.0[i][k] * rhs.0[k][j]).sum();
            }
        }
        Self(m)
    }
}

impl<const D: usize> From<SquareMatrix<D>> for Matrix {
    fn from(m: SquareMatrix<D>) -> Self {
        m.to_matrix()
    }
}

/// Row-major square matrix of runtime dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from its columns.
    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length must equal column count");
            for (i, &v) in col.iter().enumerate() {
                m.data[i * dim + j] = v;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: C64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.data[i * self.dim + j] = self.get(j, i).conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|e| e * s).collect(),
        }
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let dim = self.dim * other.dim;
        let mut m = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        m.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * v[k]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (&self.adjoint() * self).max_abs_diff(&Matrix::identity(self.dim)) <= tol
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    m.data[i * n + j] += a * rhs.get(k, j);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities() {
        let i2 = Matrix::identity(2);
        assert_eq!(i2.kron(&i2), Matrix::identity(4));
    }

    #[test]
    fn fixed_and_dynamic_products_agree() {
        let a = SquareMatrix::<2>([[ONE, C64::new(0.0, 2.0)], [C64::new(3.0, 0.0), ZERO]]);
        let b = SquareMatrix::<2>([[ZERO, ONE], [C64::new(0.5, 0.5), ONE]]);
        let fixed = (a * b).to_matrix();
        let dynamic = &a.to_matrix() * &b.to_matrix();
        assert_eq!(fixed, dynamic);
    }
}
