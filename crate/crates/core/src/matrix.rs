//! Dense matrices and vectors over a [`Field`].

use std::collections::BTreeSet;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Field;

/// Vertex index set, 0-based.
pub type IndexSet = BTreeSet<usize>;

/// Signed vector (residuals, iterates of `P - sI`).
pub type RealVector<T> = Vec<T>;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Field> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Input("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = out[(i, j)].clone() + a.clone() * b.clone();
                    out[(i, j)] = v;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn pow(&self, k: usize) -> Matrix<T> {
        assert!(self.is_square());
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `self - s I`.
    pub fn shift(&self, s: &T) -> Matrix<T> {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = out[(i, i)].clone() - s.clone();
        }
        out
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v.clone()).collect(),
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn map<U: Field>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|v| v.to_f64())
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Field::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(Field::to_json).collect()))
                .collect(),
        )
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

/// Square matrix with every entry `>= 0`, exactly. Negative entries are
/// rejected, never clamped.
#[derive(Debug, Clone, PartialEq)]
pub struct NonnegMatrix<T>(Matrix<T>);

impl<T: Field> NonnegMatrix<T> {
    pub fn new(m: Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Input(format!(
                "matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if m[(i, j)].is_negative() {
                    return Err(Error::Input(format!(
                        "entry ({}, {}) = {} is negative",
                        i + 1,
                        j + 1,
                        m[(i, j)]
                    )));
                }
            }
        }
        Ok(NonnegMatrix(m))
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        NonnegMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        NonnegMatrix(Matrix::identity(n))
    }

    pub fn diag(values: &[T]) -> Result<Self> {
        let n = values.len();
        Self::new(Matrix::from_fn(n, n, |i, j| {
            if i == j {
                values[i].clone()
            } else {
                T::zero()
            }
        }))
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.0[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        NonnegMatrix(self.0.transpose())
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        NonnegMatrix(self.0.submatrix(idx, idx))
    }

    /// Simultaneous row/column permutation: entry `(i,j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        NonnegMatrix(self.0.submatrix(perm, perm))
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        self.0.mul_vec(v)
    }

    /// Digraph edge `i -> j` iff `P_ij != 0`.
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        !self.0[(i, j)].is_zero()
    }

    pub fn to_f64(&self) -> NonnegMatrix<f64> {
        NonnegMatrix(self.0.to_f64())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

/// Vector with every entry `>= 0`, exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeVector<T>(Vec<T>);

impl<T: Field> ConeVector<T> {
    pub fn new(entries: Vec<T>) -> Result<Self> {
        if let Some(i) = entries.iter().position(Field::is_negative) {
            return Err(Error::Input(format!(
                "vector entry {} = {} is negative",
                i + 1,
                entries[i]
            )));
        }
        Ok(ConeVector(entries))
    }

    pub fn from_ints(v: &[i64]) -> Result<Self> {
        Self::new(v.iter().map(|&x| T::from_int(x)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ConeVector(vec![T::zero(); n])
    }

    /// Standard basis vector, 0-based.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![T::zero(); n];
        v[i] = T::one();
        ConeVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<T> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Field::is_zero)
    }

    pub fn support(&self) -> IndexSet {
        support(&self.0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        vec_to_json(&self.0)
    }
}

/// `{i : v_i != 0}`. Float entries count as zero only when exactly zero.
pub fn support<T: Field>(v: &[T]) -> IndexSet {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// `(I + P)^{n-1} x` expanded densely. Its support is the smallest initial
/// subset containing `supp(x)`; see
/// [`crate::classes::ClassAnalysis::smallest_initial_superset`] for the
/// support alone without the entry growth.
pub fn hat_vector<T: Field>(p: &NonnegMatrix<T>, x: &ConeVector<T>) -> ConeVector<T> {
    let n = p.n();
    let mut v = x.entries().to_vec();
    for _ in 1..n {
        let pv = p.apply(&v);
        v = v.into_iter().zip(pv).map(|(a, b)| a + b).collect();
    }
    ConeVector(v)
}

pub fn vec_to_json<T: Field>(v: &[T]) -> serde_json::Value {
    serde_json::Value::Array(v.iter().map(Field::to_json).collect())
}

/// 1-based JSON rendering of an index set.
pub fn set_to_json(s: &IndexSet) -> serde_json::Value {
    serde_json::Value::Array(s.iter().map(|&i| serde_json::json!(i + 1)).collect())
}

pub fn sub_vec<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn add_vec<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale_vec<T: Field>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

/// `max_i |v_i|` as a float.
pub fn norm_inf<T: Field>(v: &[T]) -> f64 {
    v.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max)
}

/// `max_i |v_i|` in the field itself.
pub fn max_abs<T: Field>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| T::max_of(acc, x.abs()))
}
