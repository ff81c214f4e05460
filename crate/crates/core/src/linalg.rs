//! Exact rational linear algebra.
//!
//! Vectors are rows and matrices act on the right: a linear map `V → W` is a
//! `dim V × dim W` matrix `M` with `v ↦ v M`. Kernels, ranks, and solutions
//! are computed by Gauss-Jordan elimination over `BigRational`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// A dense matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl Matrix {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row of length {} in a matrix with {cols} columns", row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { rows: r, cols, data })
    }

    /// Builds a matrix from small integers.
    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| BigRational::from_integer(x.into()))).collect();
        Matrix { rows: rows.len(), cols, data }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    /// Sets the entry at `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, x: BigRational) {
        self.data[i * self.cols + j] = x;
    }

    /// Adds to the entry at `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, x: &BigRational) {
        if !x.is_zero() {
            self.data[i * self.cols + j] += x;
        }
    }

    /// Row `i` as a slice.
    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Whether every entry vanishes.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() })
    }

    /// Scalar multiple.
    pub fn scale(&self, q: &BigRational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * q).collect() }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} and {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    /// The transpose.
    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Adds `block` into this matrix with its top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.add_at(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// The sub-matrix of the given rows and columns ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation.
    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.first().map_or(0, |m| m.rows);
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack of matrices with different row counts".into()));
        }
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut c0 = 0;
        for m in parts {
            out.set_block(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let cols = parts.first().map_or(0, |m| m.cols);
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack of matrices with different column counts".into()));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        for m in parts {
            data.extend(m.data.iter().cloned());
            rows += m.rows;
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let x = m.get(r, j) * &inv;
                m.set(r, j, x);
            }
            let pivot_row: Vec<(usize, BigRational)> =
                (c..m.cols).filter(|&j| !m.get(r, j).is_zero()).map(|j| (j, m.get(r, j).clone())).collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for (j, x) in &pivot_row {
                    let v = m.get(i, *j) - &f * x;
                    m.set(i, *j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Rank.
    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.rref().1.len()
        } else {
            self.transpose().rref().1.len()
        }
    }

    /// Rows spanning `{x : self · xᵀ = 0}`, the null space of the columns.
    pub fn null_space(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, BigRational::one());
            for (i, &p) in pivots.iter().enumerate() {
                out.set(k, p, -r.get(i, f).clone());
            }
        }
        out
    }

    /// Rows spanning `{v : v · self = 0}`, the kernel of the map `v ↦ v · self`.
    pub fn left_kernel(&self) -> Matrix {
        self.transpose().null_space()
    }

    /// A basis (as rows) of the row space.
    pub fn row_basis(&self) -> Matrix {
        let (r, pivots) = self.rref();
        r.block(0..pivots.len(), 0..self.cols)
    }

    /// Solves `X · self = target` for `X`, when every row of `target` lies in the row space.
    pub fn solve_left(&self, target: &Matrix) -> Option<Matrix> {
        if target.cols != self.cols {
            return None;
        }
        let stacked = Matrix::hstack(&[&self.transpose(), &target.transpose()]).ok()?;
        let (r, pivots) = stacked.rref();
        if pivots.iter().any(|&p| p >= self.rows) {
            return None;
        }
        let mut x = Matrix::zeros(target.rows, self.rows);
        for (i, &p) in pivots.iter().enumerate() {
            for k in 0..target.rows {
                x.set(k, p, r.get(i, self.rows + k).clone());
            }
        }
        Some(x)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A sparse row `column → value`.
pub type SparseRow = BTreeMap<usize, BigRational>;

/// Incremental Gauss-Jordan elimination of sparse linear equations.
#[derive(Clone, Debug)]
pub struct SparseEliminator {
    cols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl SparseEliminator {
    /// An empty system in `cols` unknowns.
    pub fn new(cols: usize) -> Self {
        SparseEliminator { cols, pivots: BTreeMap::new() }
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        loop {
            let Some((c, f)) = row.iter().find(|(c, _)| self.pivots.contains_key(c)).map(|(c, f)| (*c, f.clone())) else {
                return row;
            };
            for (j, x) in &self.pivots[&c] {
                let entry = row.entry(*j).or_insert_with(BigRational::zero);
                *entry -= &f * x;
                if entry.is_zero() {
                    row.remove(j);
                }
            }
        }
    }

    /// Adds the equation `Σ row[j] x_j = 0`; returns whether it was independent.
    pub fn add_equation(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row.into_iter().filter(|(_, x)| !x.is_zero()).collect());
        let Some((&c, lead)) = row.iter().next() else { return false };
        let inv = lead.recip();
        let row: SparseRow = row.iter().map(|(j, x)| (*j, x * &inv)).collect();
        for other in self.pivots.values_mut() {
            if let Some(f) = other.get(&c).cloned() {
                for (j, x) in &row {
                    let entry = other.entry(*j).or_insert_with(BigRational::zero);
                    *entry -= &f * x;
                    if entry.is_zero() {
                        other.remove(j);
                    }
                }
            }
        }
        self.pivots.insert(c, row);
        true
    }

    /// Number of independent equations.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Dimension of the solution space.
    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// A basis of the solution space, one solution per row.
    pub fn solution_basis(&self) -> Matrix {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains_key(c)).collect();
        let mut out = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out.set(k, f, BigRational::one());
            for (&p, row) in &self.pivots {
                if let Some(x) = row.get(&f) {
                    out.set(k, p, -x.clone());
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernels() {
        let m = Matrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.null_space();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());
        let lk = m.left_kernel();
        assert_eq!(lk.rows(), 1);
        assert!(lk.mul(&m).unwrap().is_zero());
    }

    #[test]
    fn solve_left_reconstructs_combinations() {
        let a = Matrix::from_i64(&[vec![1, 0, 1], vec![0, 1, 1]]);
        let t = Matrix::from_i64(&[vec![2, 3, 5]]);
        let x = a.solve_left(&t).unwrap();
        assert_eq!(x.mul(&a).unwrap(), t);
        assert!(a.solve_left(&Matrix::from_i64(&[vec![0, 0, 1]])).is_none());
    }

    #[test]
    fn sparse_eliminator_matches_dense() {
        let m = Matrix::from_i64(&[vec![1, 2, 3, 0], vec![2, 4, 6, 0], vec![1, 0, 1, 1]]);
        let mut e = SparseEliminator::new(4);
        for i in 0..3 {
            e.add_equation(m.row(i).iter().cloned().enumerate().collect());
        }
        assert_eq!(e.rank(), m.rank());
        let sol = e.solution_basis();
        assert_eq!(sol.rows(), 2);
        assert!(m.mul(&sol.transpose()).unwrap().is_zero());
    }
}
