//! Exact rational vectors and sparse matrices.
//!
//! Matrices store only nonzero entries and all eliminations are performed
//! with exact rational arithmetic. Row reduction uses a fixed pivot rule
//! (first nonzero column, first nonzero row), so every derived object —
//! reduced row-echelon forms, kernels, canonical solutions — is uniquely
//! determined by its input.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense vector of rational entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vector {
    entries: Vec<Scalar>,
}

impl Vector {
    pub fn new(entries: Vec<Scalar>) -> Self {
        Vector { entries }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            entries: vec![Scalar::zero(); dim],
        }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Vector::zero(dim);
        v.entries[i] = Scalar::one();
        v
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        Vector::new(entries.iter().map(|&n| crate::scalar::int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> &Scalar {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Scalar) {
        self.entries[i] = value;
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.entries.iter()
    }

    /// Indices and values of the nonzero entries.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.entries.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector::new(self.entries.iter().map(|a| a * c).collect())
    }

    /// Tensor product with respect to the index convention
    /// `(i, j) -> i * other.dim() + j`.
    pub fn tensor(&self, other: &Vector) -> Vector {
        let mut out = Vector::zero(self.dim() * other.dim());
        for (i, a) in self.support() {
            for (j, b) in other.support() {
                out.entries[i * other.dim() + j] = a * b;
            }
        }
        out
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(crate::scalar::format).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Index of the pair `(i, j)` in a tensor product whose second factor has
/// dimension `dim_second`.
pub fn tensor_index(i: usize, j: usize, dim_second: usize) -> usize {
    i * dim_second + j
}

/// Sparse matrix over the rationals. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Scalar>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix whose `i`-th row is `rows[i]`.
    pub fn from_rows(rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, Vector::dim);
        let mut m = Matrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dim(), cols, "ragged rows");
            for (j, x) in r.support() {
                m.entries.insert((i, j), x.clone());
            }
        }
        m
    }

    /// Builds a matrix whose `j`-th column is `cols[j]`.
    pub fn from_cols(cols: &[Vector]) -> Self {
        let rows = cols.first().map_or(0, Vector::dim);
        Matrix::from_cols_dim(rows, cols)
    }

    /// Like [`Matrix::from_cols`], with an explicit row count so an empty
    /// column list still carries its dimension.
    pub fn from_cols_dim(rows: usize, cols: &[Vector]) -> Self {
        let mut m = Matrix::zero(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.dim(), rows, "ragged columns");
            for (i, x) in c.support() {
                m.entries.insert((i, j), x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn support(&self) -> impl Iterator<Item = (&(usize, usize), &Scalar)> {
        self.entries.iter()
    }

    pub fn row(&self, i: usize) -> Vector {
        let mut v = Vector::zero(self.cols);
        for ((_, j), x) in self.entries.range((i, 0)..(i + 1, 0)) {
            v.set(*j, x.clone());
        }
        v
    }

    pub fn col(&self, j: usize) -> Vector {
        let mut v = Vector::zero(self.rows);
        for ((i, jj), x) in &self.entries {
            if *jj == j {
                v.set(*i, x.clone());
            }
        }
        v
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zero(self.cols, self.rows);
        for ((i, j), x) in &self.entries {
            m.entries.insert((*j, *i), x.clone());
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for ((i, j), x) in &other.entries {
            let v = m.get(*i, *j) + x;
            m.set(*i, *j, v);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for ((i, j), x) in &other.entries {
            let v = m.get(*i, *j) - x;
            m.set(*i, *j, v);
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut m = Matrix::zero(self.rows, self.cols);
        if c.is_zero() {
            return m;
        }
        for ((i, j), x) in &self.entries {
            m.entries.insert((*i, *j), x * c);
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut m = Matrix::zero(self.rows, other.cols);
        for ((i, k), a) in &self.entries {
            for ((_, j), b) in other.entries.range((*k, 0)..(*k + 1, 0)) {
                let v = m.get(*i, *j) + a * b;
                m.set(*i, *j, v);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        let mut out = Vector::zero(self.rows);
        for ((i, j), a) in &self.entries {
            let x = v.get(*j);
            if !x.is_zero() {
                let cur = out.get(*i) + a * x;
                out.set(*i, cur);
            }
        }
        out
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut m = Matrix::zero(self.rows + other.rows, self.cols);
        for ((i, j), x) in &self.entries {
            m.entries.insert((*i, *j), x.clone());
        }
        for ((i, j), x) in &other.entries {
            m.entries.insert((i + self.rows, *j), x.clone());
        }
        m
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut m = Matrix::zero(self.rows, self.cols + other.cols);
        for ((i, j), x) in &self.entries {
            m.entries.insert((*i, *j), x.clone());
        }
        for ((i, j), x) in &other.entries {
            m.entries.insert((*i, j + self.cols), x.clone());
        }
        m
    }

    /// Kronecker product, compatible with [`tensor_index`]: the matrix of
    /// `f (x) g` acting on pure tensors `(u (x) v)`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zero(self.rows * other.rows, self.cols * other.cols);
        for ((i, j), a) in &self.entries {
            for ((k, l), b) in &other.entries {
                m.entries
                    .insert((i * other.rows + k, j * other.cols + l), a * b);
            }
        }
        m
    }

    fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for ((i, j), x) in &self.entries {
            rows[*i][*j] = x.clone();
        }
        rows
    }

    fn from_dense(rows: Vec<Vec<Scalar>>, cols: usize) -> Matrix {
        let mut m = Matrix::zero(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_zero() {
                    m.entries.insert((i, j), x);
                }
            }
        }
        m
    }

    /// Reduced row-echelon form together with the pivot columns.
    ///
    /// Pivot selection scans columns left to right and, within a column,
    /// takes the first row not yet used as a pivot row. The result is the
    /// unique RREF of the matrix.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut a = self.to_dense();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r >= self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            for i in 0..self.rows {
                if i != r && !a[i][c].is_zero() {
                    let f = std::mem::replace(&mut a[i][c], Scalar::zero());
                    for j in (c + 1)..self.cols {
                        if !a[r][j].is_zero() {
                            a[i][j] = &a[i][j] - &(&f * &a[r][j]);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (Matrix::from_dense(a, self.cols), pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Canonical particular solution of `self * x = v`, or `None` when the
    /// system is inconsistent. Free variables are set to zero.
    pub fn solve(&self, v: &Vector) -> Option<Vector> {
        assert_eq!(self.rows, v.dim(), "dimension mismatch");
        let aug = self.hstack(&Matrix::from_cols(std::slice::from_ref(v)));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = Vector::zero(self.cols);
        for (row, col) in pivots.iter().enumerate() {
            x.set(*col, r.get(row, self.cols));
        }
        Some(x)
    }

    /// True when the matrix defines a bijection.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Exact inverse of a square invertible matrix.
    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "inverse of non-square matrix".into(),
            ));
        }
        let aug = self.hstack(&Matrix::identity(self.rows));
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != self.rows || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::Inconsistent);
        }
        let mut inv = Matrix::zero(self.rows, self.rows);
        for ((i, j), x) in &r.entries {
            if *j >= self.rows {
                inv.entries.insert((*i, j - self.rows), x.clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| Vector::from_i64(r)).collect::<Vec<_>>())
    }

    #[test]
    fn rref_rank_one() {
        let a = m(&[&[2, 4], &[1, 2]]);
        assert_eq!(a.rref(), m(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn rref_identity_fixed() {
        let a = Matrix::identity(3);
        assert_eq!(a.rref(), a);
    }

    #[test]
    fn rref_permutation() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.rref(), Matrix::identity(2));
    }

    #[test]
    fn solve_canonical_preimage() {
        let a = m(&[&[1, 0]]);
        assert_eq!(
            a.solve(&Vector::from_i64(&[3])),
            Some(Vector::from_i64(&[3, 0]))
        );
        let b = m(&[&[1, 1]]);
        let x = b.solve(&Vector::from_i64(&[2])).unwrap();
        assert_eq!(x, Vector::from_i64(&[2, 0]));
        assert_eq!(b.mul_vec(&x), Vector::from_i64(&[2]));
        let z = m(&[&[0]]);
        assert_eq!(z.solve(&Vector::from_i64(&[1])), None);
    }

    #[test]
    fn kron_matches_tensor() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[0, 1], &[1, 0]]);
        let u = Vector::from_i64(&[1, -1]);
        let v = Vector::from_i64(&[2, 5]);
        let lhs = a.kron(&b).mul_vec(&u.tensor(&v));
        let rhs = a.mul_vec(&u).tensor(&b.mul_vec(&v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[1, 2], &[3, 5]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(inv.mul(&a), Matrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn no_zero_entries_stored() {
        let mut a = Matrix::zero(2, 2);
        a.set(0, 0, int(5));
        a.set(0, 0, int(0));
        assert_eq!(a.nnz(), 0);
    }
}
