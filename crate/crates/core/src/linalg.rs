//! Dense complex vectors and matrices.
//!
//! Storage is row-major. Problem sizes in this crate stay small (a few
//! dozen antennas, at most ten users), so everything is a plain `Vec`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative pivot threshold below which [`ComplexMatrix::inverse`] reports singularity.
pub const SINGULAR_PIVOT_RATIO: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    /// Builds a vector, rejecting empty input and non-finite entries.
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter {
                name: "vector",
                reason: "length must be at least 1".into(),
            });
        }
        if let Some(k) = entries.iter().position(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "vector",
                reason: format!("entry {k} is not finite"),
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_vec(entries: Vec<C64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "vector length must be at least 1");
        Self::from_vec(vec![C64::new(0.0, 0.0); len])
    }

    /// Vector with every entry equal to `value`.
    pub fn filled(len: usize, value: C64) -> Self {
        assert!(len >= 1, "vector length must be at least 1");
        Self::from_vec(vec![value; len])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.entries
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.entries.iter()
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.entries
    }

    /// Euclidean norm.
    pub fn two_norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Per-entry moduli.
    pub fn abs_entrywise(&self) -> Vec<f64> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    /// Inner product `self^H · other`, conjugate-linear in `self`.
    pub fn dot(&self, other: &ComplexVector) -> Result<C64> {
        if self.len() != other.len() {
            return Err(Error::dims("dot", self.len(), other.len()));
        }
        Ok(dot_slices(&self.entries, &other.entries))
    }

    pub fn scale(&self, s: C64) -> ComplexVector {
        Self::from_vec(self.entries.iter().map(|z| z * s).collect())
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, s: C64, other: &ComplexVector) -> Result<ComplexVector> {
        if self.len() != other.len() {
            return Err(Error::dims("add_scaled", self.len(), other.len()));
        }
        Ok(Self::from_vec(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + s * b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &ComplexVector) -> Result<ComplexVector> {
        self.add_scaled(C64::new(-1.0, 0.0), other)
    }

    pub fn max_abs_diff(&self, other: &ComplexVector) -> f64 {
        assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Column matrix view of this vector.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix::from_raw(self.len(), 1, self.entries.clone())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ComplexVector) -> ComplexVector {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            out.extend(other.entries.iter().map(|b| a * b));
        }
        Self::from_vec(out)
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;
    fn index(&self, k: usize) -> &C64 {
        &self.entries[k]
    }
}

impl IndexMut<usize> for ComplexVector {
    fn index_mut(&mut self, k: usize) -> &mut C64 {
        &mut self.entries[k]
    }
}

impl fmt::Debug for ComplexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

pub(crate) fn dot_slices(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: format!("dimensions must be positive, got {rows}x{cols}"),
            });
        }
        if rows * cols != data.len() {
            return Err(Error::dims("matrix", rows * cols, data.len()));
        }
        if data.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "matrix",
                reason: "entries must be finite".into(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::dims("from_rows", "equal row lengths", "ragged rows"));
        }
        Self::new(n, m, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, ComplexVector::len);
        if cols == 0 {
            return Err(Error::dims("from_columns", "at least one column", 0));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::dims("from_columns", rows, bad.len()));
        }
        let mut data = vec![C64::new(0.0, 0.0); rows * cols];
        for (j, c) in columns.iter().enumerate() {
            for (i, z) in c.iter().enumerate() {
                data[i * cols + j] = *z;
            }
        }
        Ok(Self::from_raw(rows, cols, data))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        Self::from_raw(rows, cols, vec![C64::new(0.0, 0.0); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn set_column(&mut self, j: usize, v: &ComplexVector) -> Result<()> {
        if v.len() != self.rows {
            return Err(Error::dims("set_column", self.rows, v.len()));
        }
        for (i, z) in v.iter().enumerate() {
            self[(i, j)] = *z;
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> ComplexMatrix {
        let mut out = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self[(i, j)].conj());
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(
                "matmul",
                format!("{} rows on the right", self.cols),
                format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols),
            ));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(Self::from_raw(self.rows, other.cols, out))
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.len() {
            return Err(Error::dims("mul_vec", self.cols, v.len()));
        }
        Ok(ComplexVector::from_vec(
            (0..self.rows)
                .map(|i| self.row(i).iter().zip(v.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    /// `self^H · v` without materializing the conjugate transpose.
    pub fn herm_mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.rows != v.len() {
            return Err(Error::dims("herm_mul_vec", self.rows, v.len()));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.cols];
        for (i, vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * vi;
            }
        }
        Ok(ComplexVector::from_vec(out))
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::dims(
                "add",
                format!("{:?}", self.shape()),
                format!("{:?}", other.shape()),
            ));
        }
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Fails when a pivot drops below [`SINGULAR_PIVOT_RATIO`] times the
    /// largest entry modulus of the input.
    pub fn inverse(&self) -> Result<ComplexMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let threshold = SINGULAR_PIVOT_RATIO * scale;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;

        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a[r * n + col].norm()))
                .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_mag <= threshold || pivot_mag == 0.0 {
                return Err(Error::Singular {
                    pivot: pivot_mag,
                    threshold,
                });
            }
            if pivot_row != col {
                for k in 0..n {
                    a.swap(col * n + k, pivot_row * n + k);
                    inv.swap(col * n + k, pivot_row * n + k);
                }
            }
            let p = a[col * n + col].inv();
            for k in 0..n {
                a[col * n + k] *= p;
                inv[col * n + k] *= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    let (ak, ik) = (a[col * n + k], inv[col * n + k]);
                    a[r * n + k] -= factor * ak;
                    inv[r * n + k] -= factor * ik;
                }
            }
        }
        Ok(Self::from_raw(n, n, inv))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}
