//! Dense complex matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::NumericError;

pub type C64 = Complex64;

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = c(x, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, NumericError> {
        let cols = rows.first().map_or(0, Vec::len);
        for r in rows {
            if r.len() != cols {
                return Err(NumericError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(CMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        CMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn columns(&self, range: std::ops::Range<usize>) -> CMatrix {
        CMatrix::from_fn(self.rows, range.len(), |i, j| self[(i, range.start + j)])
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `self^H · other` without forming the adjoint.
    pub fn adjoint_mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, other.rows, "row dimensions");
        let mut out = CMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let arow = self.row(k);
            let brow = other.row(k);
            for (i, a) in arow.iter().enumerate() {
                let a = a.conj();
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Horizontal concatenation.
    pub fn hstack(blocks: &[CMatrix]) -> CMatrix {
        let rows = blocks.first().map_or(0, |b| b.rows);
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = CMatrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out[(i, off + j)] = b[(i, j)];
                }
            }
            off += b.cols;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i..self.cols).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)] == C64::new(0.0, 0.0)))
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub(crate) fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", fmt_complex(self[(i, j)]))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A square matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Mirrors the upper triangle; the diagonal keeps only its real part.
    pub fn from_upper(m: &CMatrix) -> Result<Self, NumericError> {
        if !m.is_square() {
            return Err(NumericError::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        let n = m.rows();
        Ok(HermitianMatrix(CMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Less => m[(i, j)],
            std::cmp::Ordering::Equal => c(m[(i, i)].re, 0.0),
            std::cmp::Ordering::Greater => m[(j, i)].conj(),
        })))
    }

    /// Accepts `m` when it is Hermitian within `tol`, then symmetrizes exactly.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self, NumericError> {
        if !m.is_square() {
            return Err(NumericError::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        if !m.is_hermitian(tol) {
            return Err(NumericError::NotHermitian);
        }
        Self::from_upper(&m)
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        HermitianMatrix(CMatrix::from_real_diagonal(d))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(CMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(n, n))
    }

    /// `B · B^H` for any rectangular `B`.
    pub fn gram_of(b: &CMatrix) -> Self {
        let prod = b.mul(&b.adjoint());
        Self::from_upper(&prod).unwrap()
    }

    /// The orthogonal projection `U · U^H` onto the span of orthonormal columns `U`.
    pub fn projector(frame: &CMatrix) -> Self {
        Self::gram_of(frame)
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(self.0.sub(&other.0))
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    /// Zero-pads to dimension `n >= dim`.
    pub fn pad(&self, n: usize) -> HermitianMatrix {
        let d = self.dim();
        assert!(n >= d);
        HermitianMatrix(CMatrix::from_fn(n, n, |i, j| {
            if i < d && j < d {
                self.0[(i, j)]
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn diagonal(&self) -> Option<Vec<f64>> {
        self.0.is_diagonal().then(|| (0..self.dim()).map(|i| self.0[(i, i)].re).collect())
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
