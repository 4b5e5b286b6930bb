//! Exact linear algebra over `F_p`: rank, kernels and affine solves.
//!
//! Two storage forms exist. [`DenseMatrix`] is row-major; [`SparseMatrix`]
//! keeps sorted `(column, value)` lists per row and is what the
//! multiplication-by-forms builders produce. Both answer [`rank`] through a
//! rank-only path that consumes a working copy and never keeps the echelon
//! form. Kernels and affine solves go through a reduced row echelon form and
//! are meant for the small matrices that need them.

mod dense;
mod sparse;

pub use sparse::DENSE_SWITCH;

use thiserror::Error;

use crate::field::{FieldElement, PrimeField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("moduli disagree: {0} vs {1}")]
    ModulusMismatch(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl DenseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        DenseMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds from rows of arbitrary integers, reducing each into `[0, p)`.
    pub fn from_rows<T: Into<i64> + Copy>(field: PrimeField, rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| field.from_i64(v.into()).value()))
            .collect();
        Ok(DenseMatrix { field, rows: rows.len(), cols, data })
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).value());
            }
        }
        DenseMatrix { field, rows, cols, data }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(u64::from(self.data[i * self.cols + j]))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v.value();
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(f.elem(a.into()), f.elem(b.into())).value())
            .collect();
        Ok(DenseMatrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        self.check_compatible(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let t = other.transpose();
        let f = self.field;
        Ok(DenseMatrix::from_fn(f, self.rows, other.cols, |i, j| f.dot(self.row(i), t.row(j))))
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let raw: Vec<u32> = v.iter().map(|x| x.value()).collect();
        Ok((0..self.rows).map(|i| self.field.dot(self.row(i), &raw)).collect())
    }

    fn check_compatible(&self, other: &Self) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::ModulusMismatch(self.field.modulus(), other.field.modulus()));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn rank(&self) -> usize {
        self.clone().into_rank()
    }

    /// Rank-only fast path; the matrix is consumed as the working copy.
    pub fn into_rank(self) -> usize {
        dense::rank_consuming(&self.field, self.rows, self.cols, self.data)
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j as u32, v))
                    .collect()
            })
            .collect();
        SparseMatrix { field: self.field, rows: self.rows, cols: self.cols, entries: rows }
    }

    /// Reduced row echelon form of a copy of this matrix.
    pub fn rref(&self) -> Echelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.data[i * m.cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inverse(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }
}

/// A reduced row echelon form: the first `pivots.len()` rows are nonzero and
/// row `i` has a leading 1 in column `pivots[i]`, the only nonzero entry of
/// that column.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.matrix.cols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.matrix.cols).filter(|&c| !is_pivot[c]).collect()
    }
}

/// Row-list sparse matrix; each row's entries are sorted by column and
/// contain no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(u32, u32)>>,
}

impl SparseMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        SparseMatrix { field, rows, cols, entries: vec![Vec::new(); rows] }
    }

    /// Builds from `(row, col, value)` triplets; repeated positions are summed.
    pub fn from_triplets(
        field: PrimeField,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, FieldElement)>,
    ) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for (i, j, v) in triplets {
            m.add_at(i, j, v);
        }
        m
    }

    /// Adds `v` at `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.rows && j < self.cols, "entry ({i}, {j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            return;
        }
        let row = &mut self.entries[i];
        let j = j as u32;
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => {
                let s = self.field.add(self.field.elem(row[k].1.into()), v);
                if s.is_zero() {
                    row.remove(k);
                } else {
                    row[k].1 = s.value();
                }
            }
            Err(k) => row.insert(k, (j, v.value())),
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn row_entries(&self, i: usize) -> &[(u32, u32)] {
        &self.entries[i]
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        let row = &self.entries[i];
        match row.binary_search_by_key(&(j as u32), |&(c, _)| c) {
            Ok(k) => self.field.elem(row[k].1.into()),
            Err(_) => FieldElement::ZERO,
        }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = vec![Vec::new(); self.cols];
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                entries[j as usize].push((i as u32, v));
            }
        }
        SparseMatrix { field: self.field, rows: self.cols, cols: self.rows, entries }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.field, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                m.data[i * self.cols + j as usize] = v;
            }
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.clone().into_rank()
    }

    /// Rank-only structured elimination on the consumed matrix.
    pub fn into_rank(self) -> usize {
        sparse::rank_consuming(&self.field, self.rows, self.cols, self.entries)
    }
}

/// A matrix in either storage form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFp {
    Dense(DenseMatrix),
    Sparse(SparseMatrix),
}

/// Which storage a [`MatrixFp`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    Dense,
    Sparse,
}

impl MatrixFp {
    pub fn storage(&self) -> Storage {
        match self {
            MatrixFp::Dense(_) => Storage::Dense,
            MatrixFp::Sparse(_) => Storage::Sparse,
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            MatrixFp::Dense(m) => m.rows(),
            MatrixFp::Sparse(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixFp::Dense(m) => m.cols(),
            MatrixFp::Sparse(m) => m.cols(),
        }
    }

    pub fn field(&self) -> &PrimeField {
        match self {
            MatrixFp::Dense(m) => m.field(),
            MatrixFp::Sparse(m) => m.field(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            MatrixFp::Dense(m) => m.clone(),
            MatrixFp::Sparse(m) => m.to_dense(),
        }
    }
}

impl From<DenseMatrix> for MatrixFp {
    fn from(m: DenseMatrix) -> Self {
        MatrixFp::Dense(m)
    }
}

impl From<SparseMatrix> for MatrixFp {
    fn from(m: SparseMatrix) -> Self {
        MatrixFp::Sparse(m)
    }
}

pub fn rank(m: &MatrixFp) -> usize {
    match m {
        MatrixFp::Dense(d) => d.rank(),
        MatrixFp::Sparse(s) => s.rank(),
    }
}

/// A basis of the right null space: `cols - rank` vectors `v` with `M v = 0`.
pub fn kernel_basis(m: &MatrixFp) -> Vec<Vec<FieldElement>> {
    let ech = m.to_dense().rref();
    let f = *ech.matrix.field();
    let cols = ech.matrix.cols();
    ech.free_columns()
        .into_iter()
        .map(|free| {
            let mut v = vec![FieldElement::ZERO; cols];
            v[free] = FieldElement::ONE;
            for (r, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(ech.matrix.get(r, free));
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AffineSolution {
    /// One particular solution and the dimension of the solution space.
    Consistent { particular: Vec<FieldElement>, null_dim: usize },
    Inconsistent,
}

/// Solves `A x = b`.
pub fn solve_affine(a: &MatrixFp, b: &[FieldElement]) -> Result<AffineSolution, LinalgError> {
    if b.len() != a.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            a.rows(),
            b.len()
        )));
    }
    let dense = a.to_dense();
    let f = *dense.field();
    let (rows, cols) = (dense.rows(), dense.cols());
    let augmented = DenseMatrix::from_fn(f, rows, cols + 1, |i, j| if j < cols { dense.get(i, j) } else { b[i] });
    let ech = augmented.rref();
    if ech.pivots.last() == Some(&cols) {
        return Ok(AffineSolution::Inconsistent);
    }
    let mut particular = vec![FieldElement::ZERO; cols];
    for (r, &pc) in ech.pivots.iter().enumerate() {
        particular[pc] = ech.matrix.get(r, cols);
    }
    Ok(AffineSolution::Consistent { particular, null_dim: cols - ech.rank() })
}

#[cfg(test)]
mod tests;
