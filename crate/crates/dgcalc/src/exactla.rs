//! Exact dense linear algebra over a field.
//!
//! Everything here is deterministic: pivots are always the first nonzero
//! entry in row-major order, so bases returned by [`Matrix::kernel_basis`],
//! [`complement_basis`] and friends are stable across runs. The instances the
//! rest of the crate produces are tiny (hom spaces of dimension at most a few
//! hundred), so no attempt is made at sparsity or asymptotic cleverness.

use std::fmt;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("vectors are not linearly independent")]
    NotIndependent,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.entries[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zero(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), dim, "column has wrong length");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn add_assign_at(&mut self, r: usize, c: usize, v: S) {
        let e = &mut self.entries[r * self.cols + c];
        *e = e.clone() + v;
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LaError> {
        if self.cols != other.rows {
            return Err(LaError::DimensionMismatch {
                expected: format!("{}x{} * {}xN", self.rows, self.cols, self.cols),
                got: format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols),
            });
        }
        let mut m = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    m.add_assign_at(r, c, a.clone() * b.clone());
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>, LaError> {
        if v.len() != self.cols {
            return Err(LaError::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                got: format!("vector of length {}", v.len()),
            });
        }
        let mut out = vec![S::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !v[c].is_zero() {
                    out[r] = out[r].clone() + a.clone() * v[c].clone();
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Reduced row-echelon form together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // first nonzero entry in this column at or below `row`
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = S::one() / m.get(row, col).clone();
            for c in 0..m.cols {
                let v = m.get(row, c).clone() * inv.clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c).clone() - f.clone() * m.get(row, c).clone();
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, ordered by free column (pivot-ordered, deterministic).
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![S::zero(); self.cols];
            v[free] = S::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.get(prow, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn image_basis(&self) -> Vec<Vec<S>> {
        let (_, pivots) = self.rref();
        pivots.iter().map(|&c| self.column(c)).collect()
    }

    /// Any solution of `self * x = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &[S]) -> Result<Option<Vec<S>>, LaError> {
        if b.len() != self.rows {
            return Err(LaError::DimensionMismatch {
                expected: format!("rhs of length {}", self.rows),
                got: format!("rhs of length {}", b.len()),
            });
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![S::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.get(prow, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solves `self * X = B` column by column; `None` if any column is inconsistent.
    pub fn solve_matrix(&self, b: &Matrix<S>) -> Result<Option<Matrix<S>>, LaError> {
        if b.rows != self.rows {
            return Err(LaError::DimensionMismatch {
                expected: format!("rhs with {} rows", self.rows),
                got: format!("rhs with {} rows", b.rows),
            });
        }
        let mut cols = Vec::with_capacity(b.cols);
        for c in 0..b.cols {
            match self.solve(&b.column(c))? {
                Some(x) => cols.push(x),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(self.cols, &cols)))
    }
}

/// Incremental independence filter: feeds vectors one at a time and reports
/// whether each enlarges the span so far. Deterministic (Gaussian, first
/// nonzero pivot).
pub struct SpanBuilder<S> {
    dim: usize,
    // reduced rows with their pivot positions
    reduced: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> SpanBuilder<S> {
    pub fn new(dim: usize) -> Self {
        SpanBuilder {
            dim,
            reduced: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.reduced.len()
    }

    /// Returns `true` (and absorbs the vector) if it is independent from the
    /// span built so far.
    pub fn push(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (p, row) in &self.reduced {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    *wi = wi.clone() - f.clone() * ri.clone();
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let inv = S::one() / w[p].clone();
                for wi in w.iter_mut() {
                    *wi = wi.clone() * inv.clone();
                }
                self.reduced.push((p, w));
                true
            }
        }
    }

    pub fn contains(&self, v: &[S]) -> bool {
        let mut w = v.to_vec();
        for (p, row) in &self.reduced {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (wi, ri) in w.iter_mut().zip(row.iter()) {
                    *wi = wi.clone() - f.clone() * ri.clone();
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }
}

/// Extends the independent set `sub` to a basis of the ambient space by
/// greedily adding standard basis vectors.
pub fn complement_basis<S: Scalar>(
    sub: &[Vec<S>],
    ambient_dim: usize,
) -> Result<Vec<Vec<S>>, LaError> {
    let mut span = SpanBuilder::new(ambient_dim);
    for v in sub {
        if v.len() != ambient_dim {
            return Err(LaError::DimensionMismatch {
                expected: format!("vectors of length {ambient_dim}"),
                got: format!("vector of length {}", v.len()),
            });
        }
        if !span.push(v) {
            return Err(LaError::NotIndependent);
        }
    }
    let mut comp = Vec::new();
    for i in 0..ambient_dim {
        let mut e = vec![S::zero(); ambient_dim];
        e[i] = S::one();
        if span.push(&e) {
            comp.push(e);
        }
    }
    Ok(comp)
}

/// Projection matrix onto the quotient by `span(sub)`, in the coordinates of
/// the deterministic complement from [`complement_basis`]. Maps ambient
/// coordinates to quotient coordinates (`(ambient_dim - |sub|) x ambient_dim`).
pub fn quotient_matrix<S: Scalar>(
    sub: &[Vec<S>],
    ambient_dim: usize,
) -> Result<Matrix<S>, LaError> {
    let comp = complement_basis(sub, ambient_dim)?;
    let mut all: Vec<Vec<S>> = sub.to_vec();
    all.extend(comp.iter().cloned());
    let basis = Matrix::from_columns(ambient_dim, &all);
    let inv = basis
        .solve_matrix(&Matrix::identity(ambient_dim))?
        .expect("basis matrix is invertible");
    // rows of inv corresponding to complement coordinates
    let mut q = Matrix::zero(ambient_dim - sub.len(), ambient_dim);
    for r in 0..q.rows() {
        for c in 0..ambient_dim {
            q.set(r, c, inv.get(sub.len() + r, c).clone());
        }
    }
    Ok(q)
}
