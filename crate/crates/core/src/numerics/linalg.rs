use std::ops::Index;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::Real;
use crate::error::{Error, Result};

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CVector<T> {
    data: Vec<Complex<T>>,
}

impl<T: Real> CVector<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            data: vec![Complex::new(T::zero(), T::zero()); n],
        }
    }

    pub fn from_vec(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex<T>] {
        &mut self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.data.iter()
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    fn check_len(&self, other: &Self, what: &str) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::dims(what, self.len(), other.len()));
        }
        Ok(())
    }

    /// Hermitian inner product `self^H other = Σ conj(self_m) other_m`.
    pub fn dot(&self, other: &Self) -> Result<Complex<T>> {
        self.check_len(other, "inner product")?;
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &Self) -> Complex<T> {
        self.data
            .iter()
            .zip(&other.data)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::from_vec(self.data.iter().map(|x| x * c).collect())
    }

    pub fn scale_real(&self, c: T) -> Self {
        Self::from_vec(self.data.iter().map(|x| x * c).collect())
    }

    /// Returns `self / ‖self‖`; fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n <= T::zero() || !n.is_finite() {
            return Err(Error::Domain("cannot normalize zero or non-finite vector".into()));
        }
        Ok(self.scale_real(T::one() / n))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_len(other, "vector add")?;
        Ok(Self::from_vec(
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        ))
    }

    /// `self += other` with dimension check.
    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_len(other, "vector add")?;
        self.add_assign_unchecked(other);
        Ok(())
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    /// `self += alpha * other`.
    pub fn axpy(&mut self, alpha: Complex<T>, other: &Self) -> Result<()> {
        self.check_len(other, "axpy")?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += alpha * b;
        }
        Ok(())
    }

    /// Element-wise product, i.e. `diag(self) · other`.
    pub fn diag_mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other, "diagonal scaling")?;
        Ok(self.diag_mul_unchecked(other))
    }

    pub(crate) fn diag_mul_unchecked(&self, other: &Self) -> Self {
        Self::from_vec(self.data.iter().zip(&other.data).map(|(a, b)| a * b).collect())
    }

    /// Diagonal matrix with `self` on its diagonal.
    pub fn to_diag(&self) -> CMatrix<T> {
        let n = self.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, v) in self.data.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl<T> Index<usize> for CVector<T> {
    type Output = Complex<T>;
    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dims("matrix storage", rows * cols, data.len()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex<T>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn matvec(&self, x: &CVector<T>) -> Result<CVector<T>> {
        if x.len() != self.cols {
            return Err(Error::dims("matrix-vector product", self.cols, x.len()));
        }
        Ok(self.matvec_unchecked(x))
    }

    pub(crate) fn matvec_unchecked(&self, x: &CVector<T>) -> CVector<T> {
        let xs = x.as_slice();
        CVector::from_vec(
            self.data
                .chunks_exact(self.cols.max(1))
                .take(self.rows)
                .map(|row| {
                    row.iter()
                        .zip(xs)
                        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        )
    }

    /// `out += self · x` without allocating.
    pub(crate) fn matvec_acc(&self, x: &CVector<T>, out: &mut CVector<T>) {
        let xs = x.as_slice();
        for (o, row) in out
            .as_mut_slice()
            .iter_mut()
            .zip(self.data.chunks_exact(self.cols.max(1)))
        {
            for (a, b) in row.iter().zip(xs) {
                *o += a * b;
            }
        }
    }

    pub fn matmul(&self, other: &CMatrix<T>) -> Result<CMatrix<T>> {
        if other.rows != self.cols {
            return Err(Error::dims("matrix product", self.cols, other.rows));
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }
}
