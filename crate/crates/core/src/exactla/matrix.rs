use std::fmt;

use serde::{Deserialize, Serialize};

use super::Field;
use crate::error::{FrobError, Result};

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    /// Builds from already-reduced residues.
    pub fn from_data(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        debug_assert!(data.iter().all(|&x| x < field.p()));
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Builds from signed integers, reducing mod p. `cols` is needed for the 0-row case.
    pub fn from_rows(field: Field, rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(FrobError::DimensionMismatch(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    r.len(),
                    cols
                )));
            }
            data.extend(r.iter().map(|&v| field.from_i64(v)));
        }
        Ok(Matrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn row_vector(field: Field, v: &[u32]) -> Self {
        Matrix {
            field,
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    pub fn from_row_vectors(field: Field, cols: usize, vs: &[Vec<u32>]) -> Self {
        let mut data = Vec::with_capacity(vs.len() * cols);
        for v in vs {
            assert_eq!(v.len(), cols);
            data.extend_from_slice(v);
        }
        Matrix {
            field,
            rows: vs.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub(crate) fn data_mut(&mut self) -> &mut [u32] {
        &mut self.data
    }
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries as integers in `0..p`.
    pub fn to_int_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&x| x as i64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        assert_eq!(self.field, other.field);
        let f = self.field;
        let p = f.p() as u64;
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![0u64; n * m];
        // accumulate in u64 with periodic reduction: each term < p^2 < 2^62
        let reduce_every = (u64::MAX / ((p - 1).max(1) * (p - 1).max(1)))
            .saturating_sub(1)
            .max(1) as usize;
        for i in 0..n {
            let orow = &mut out[i * m..(i + 1) * m];
            let mut since = 0usize;
            for t in 0..k {
                let a = self.data[i * k + t] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[t * m..(t + 1) * m];
                for j in 0..m {
                    orow[j] += a * brow[j] as u64;
                }
                since += 1;
                if since >= reduce_every {
                    for x in orow.iter_mut() {
                        *x %= p;
                    }
                    since = 0;
                }
            }
            for x in orow.iter_mut() {
                *x %= p;
            }
        }
        Matrix {
            field: f,
            rows: n,
            cols: m,
            data: out.into_iter().map(|x| x as u32).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        let p = f.p() as u64;
        let mut out = vec![0u64; self.cols];
        for (t, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let brow = self.row(t);
            for j in 0..self.cols {
                out[j] = (out[j] + a as u64 * brow[j] as u64) % p;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let f = self.field;
        Matrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: u32, other: &Matrix) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if c == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = f.mul_add(*a, c, b);
        }
    }

    /// Kronecker product; row-vector convention `(u⊗v)(P⊗Q) = uP ⊗ vQ`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(f, r1 * r2, c1 * c2);
        for i in 0..r1 {
            for j in 0..c1 {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..r2 {
                    for l in 0..c2 {
                        let b = other.get(k, l);
                        if b != 0 {
                            out.set(i * r2 + k, j * c2 + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
            out.row_mut(i)[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.row_mut(i)[..self.cols].copy_from_slice(self.row(i));
        }
        for i in 0..other.rows {
            out.row_mut(self.rows + i)[self.cols..].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn block_diag(field: Field, blocks: &[Matrix]) -> Matrix {
        let mut out = Matrix::zeros(field, 0, 0);
        for b in blocks {
            out = out.direct_sum(b);
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            field: self.field,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.data[i * idx.len() + k] = self.get(i, j);
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for i in 0..rows {
            out.row_mut(i)
                .copy_from_slice(&self.row(r0 + i)[c0..c0 + cols]);
        }
        out
    }

    /// Flattens row-major into a single row vector.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn unflatten(field: Field, rows: usize, cols: usize, v: &[u32]) -> Matrix {
        Matrix::from_data(field, rows, cols, v.to_vec())
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> u32 {
        let f = self.field;
        (0..self.rows.min(self.cols)).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<{:?}>{}x{}[", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Serialized as nested integer rows plus the modulus.
#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    p: u32,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<u32>>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            p: self.field.p(),
            rows: self.rows,
            cols: self.cols,
            entries: self.row_vecs(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(d)?;
        let field = Field::new(r.p as u64).map_err(serde::de::Error::custom)?;
        let mut data = Vec::with_capacity(r.rows * r.cols);
        for row in &r.entries {
            if row.len() != r.cols {
                return Err(serde::de::Error::custom("ragged matrix"));
            }
            data.extend(row.iter().map(|&x| x % field.p()));
        }
        if data.len() != r.rows * r.cols {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        Ok(Matrix {
            field,
            rows: r.rows,
            cols: r.cols,
            data,
        })
    }
}
