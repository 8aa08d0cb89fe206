//! Dense matrices over F_q: Gaussian elimination, structured constructors.

use crate::error::{Error, Result};
use crate::ff::{FieldElement, FieldSpec};

/// Dense row-major matrix over one prime field. A value object: all
/// operations allocate fresh results.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<u32>,
}

impl MatrixFq {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        MatrixFq {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing entries mod q.
    pub fn from_rows(field: FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut m = Self::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.data[i * c + j] = (v % field.q()) as u32;
            }
        }
        Ok(m)
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Self {
        let mut m = Self::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Column vector from a slice of elements.
    pub fn column(field: FieldSpec, v: &[FieldElement]) -> Result<Self> {
        let mut m = Self::zero(field, v.len(), 1);
        for (i, e) in v.iter().enumerate() {
            if e.field() != field {
                return Err(Error::FieldMismatch);
            }
            m.set(i, 0, *e);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.data[i * self.cols + j] as u64)
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(v.field(), self.field, "entry from a different field");
        self.data[i * self.cols + j] = v.value() as u32;
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// New matrix keeping the given rows, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let mut m = Self::zero(self.field, idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            if i >= self.rows {
                return Err(Error::BadIndex(format!("row {i}")));
            }
            for j in 0..self.cols {
                m.data[r * self.cols + j] = self.data[i * self.cols + j];
            }
        }
        Ok(m)
    }

    /// New matrix keeping the given columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Result<Self> {
        let mut m = Self::zero(self.field, self.rows, idx.len());
        for (c, &j) in idx.iter().enumerate() {
            if j >= self.cols {
                return Err(Error::BadIndex(format!("column {j}")));
            }
            for i in 0..self.rows {
                m.data[i * idx.len() + c] = self.data[i * self.cols + j];
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &MatrixFq) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = self.clone();
        m.rows += other.rows;
        m.data.extend_from_slice(&other.data);
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        m
    }

    /// Standard matrix product over F_q.
    pub fn mul(&self, other: &MatrixFq) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.field.q();
        let mut m = Self::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for t in 0..self.cols {
                    acc += self.data[i * self.cols + t] as u64
                        * other.data[t * other.cols + j] as u64;
                    acc %= q;
                }
                m.data[i * other.cols + j] = acc as u32;
            }
        }
        Ok(m)
    }

    /// Matrix-vector product, returning the result as a plain vector.
    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        let col = Self::column(self.field, v)?;
        let out = self.mul(&col)?;
        Ok((0..out.rows).map(|i| out.get(i, 0)).collect())
    }

    /// Rank via Gaussian elimination. Zero or empty matrices have rank 0.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce()
    }

    // In-place reduced row echelon form; returns the rank.
    fn row_reduce(&mut self) -> usize {
        let q = self.field.q();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            let Some(pr) = (pivot_row..self.rows).find(|&r| self.data[r * self.cols + col] != 0)
            else {
                continue;
            };
            self.swap_rows(pivot_row, pr);
            let inv = self
                .field
                .elem(self.data[pivot_row * self.cols + col] as u64)
                .inv()
                .expect("pivot is nonzero")
                .value();
            for j in col..self.cols {
                let idx = pivot_row * self.cols + j;
                self.data[idx] = (self.data[idx] as u64 * inv % q) as u32;
            }
            for r in 0..self.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = self.data[r * self.cols + col] as u64;
                if factor == 0 {
                    continue;
                }
                for j in col..self.cols {
                    let sub = factor * self.data[pivot_row * self.cols + j] as u64 % q;
                    let idx = r * self.cols + j;
                    self.data[idx] = ((self.data[idx] as u64 + q - sub) % q) as u32;
                }
            }
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rank() < self.rows {
            return Err(Error::Singular);
        }
        let mut aug = self.clone();
        let id = Self::identity(self.field, self.rows);
        aug.cols = self.cols * 2;
        let mut data = Vec::with_capacity(self.rows * aug.cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
            data.extend_from_slice(&id.data[i * self.cols..(i + 1) * self.cols]);
        }
        aug.data = data;
        aug.row_reduce();
        let mut inv = Self::zero(self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                inv.data[i * self.cols + j] = aug.data[i * aug.cols + self.cols + j];
            }
        }
        Ok(inv)
    }

    /// Solves `self * x = rhs` when `self` has full column rank and the
    /// system is consistent.
    pub fn solve(&self, rhs: &MatrixFq) -> Result<Self> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} equation rows vs {} rhs rows",
                self.rows, rhs.rows
            )));
        }
        let mut aug = Self::zero(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i * aug.cols + j] = self.data[i * self.cols + j];
            }
            for j in 0..rhs.cols {
                aug.data[i * aug.cols + self.cols + j] = rhs.data[i * rhs.cols + j];
            }
        }
        aug.row_reduce();
        // Pivot bookkeeping over the coefficient block only.
        let mut x = Self::zero(self.field, self.cols, rhs.cols);
        let mut pivot_row = 0;
        let mut pivots = vec![None; self.cols];
        for col in 0..self.cols {
            if pivot_row < self.rows && aug.data[pivot_row * aug.cols + col] != 0 {
                pivots[col] = Some(pivot_row);
                pivot_row += 1;
            }
        }
        let rank = pivot_row;
        // Rows below the pivots must have zero rhs, else no solution exists.
        for r in rank..self.rows {
            if (0..rhs.cols).any(|j| aug.data[r * aug.cols + self.cols + j] != 0) {
                return Err(Error::Inconsistent);
            }
        }
        if rank < self.cols {
            return Err(Error::Underdetermined {
                rank,
                cols: self.cols,
            });
        }
        for (col, pr) in pivots.iter().enumerate() {
            let pr = pr.expect("full column rank");
            for j in 0..rhs.cols {
                x.data[col * rhs.cols + j] = aug.data[pr * aug.cols + self.cols + j];
            }
        }
        Ok(x)
    }
}

/// Cauchy matrix with entries `inv(x_i + y_j)`.
///
/// With `points = None` the points default to `x_i = i` and
/// `y_j = (q - m - j) mod q`, so `x_i + y_j = i - m - j != 0 mod q`
/// whenever `m + n <= q`.
pub fn cauchy_matrix(
    field: FieldSpec,
    m: usize,
    n: usize,
    points: Option<(&[u64], &[u64])>,
) -> Result<MatrixFq> {
    let q = field.q();
    let (xs, ys): (Vec<FieldElement>, Vec<FieldElement>) = match points {
        Some((xs, ys)) => {
            if xs.len() != m || ys.len() != n {
                return Err(Error::BadPoints(format!(
                    "expected {m} xs and {n} ys, got {} and {}",
                    xs.len(),
                    ys.len()
                )));
            }
            let xs: Vec<_> = xs.iter().map(|&v| field.elem(v)).collect();
            let ys: Vec<_> = ys.iter().map(|&v| field.elem(v)).collect();
            for pts in [&xs, &ys] {
                for i in 0..pts.len() {
                    for j in i + 1..pts.len() {
                        if pts[i] == pts[j] {
                            return Err(Error::BadPoints(format!(
                                "repeated point {}",
                                pts[i]
                            )));
                        }
                    }
                }
            }
            (xs, ys)
        }
        None => {
            if (m + n) as u64 > q {
                return Err(Error::FieldTooSmall {
                    needed: (m + n) as u64,
                    q,
                });
            }
            let xs = (0..m as u64).map(|i| field.elem(i)).collect();
            let ys = (0..n as u64).map(|j| field.elem(q - m as u64 - j)).collect();
            (xs, ys)
        }
    };
    let mut out = MatrixFq::zero(field, m, n);
    for i in 0..m {
        for j in 0..n {
            let s = xs[i] + ys[j];
            if s.is_zero() {
                return Err(Error::BadPoints(format!(
                    "x_{} + y_{} = 0 (x = {}, y = {})",
                    i, j, xs[i], ys[j]
                )));
            }
            out.set(i, j, s.inv()?);
        }
    }
    Ok(out)
}

/// Vandermonde matrix: row i is `(1, x_i, x_i^2, ..., x_i^{cols-1})`.
pub fn vandermonde_matrix(field: FieldSpec, points: &[u64], cols: usize) -> Result<MatrixFq> {
    let pts: Vec<FieldElement> = points.iter().map(|&v| field.elem(v)).collect();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if pts[i] == pts[j] {
                return Err(Error::RepeatedPoint(pts[i].value()));
            }
        }
    }
    Ok(MatrixFq::from_fn(field, pts.len(), cols, |i, j| {
        pts[i].pow(j as u64)
    }))
}
