//! Compressed sparse row matrices over `i64`.

use std::fmt;

/// A sparse integer matrix in CSR layout. Rows are sorted by column and hold no zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<i64>,
}

impl fmt::Debug for SparseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseMatrix({}x{}, nnz {})", self.rows, self.cols, self.nnz())
    }
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, row_ptr: vec![0; rows + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n as u32).collect(),
            values: vec![1; n],
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(usize, usize, i64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<i64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        let mut counts = vec![0usize; rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) outside {rows}x{cols}");
            if last == Some((r, c)) {
                let x = values.last_mut().unwrap();
                *x = x.checked_add(v).expect("sparse entry overflow");
            } else {
                if let Some(&0) = values.last() {
                    // drop a cancelled entry before starting the next one
                    values.pop();
                    col_idx.pop();
                    counts[last.unwrap().0] -= 1;
                }
                col_idx.push(c as u32);
                values.push(v);
                counts[r] += 1;
                last = Some((r, c));
            }
        }
        if let Some(&0) = values.last() {
            values.pop();
            col_idx.pop();
            counts[last.unwrap().0] -= 1;
        }
        for r in 0..rows {
            row_ptr[r + 1] = row_ptr[r] + counts[r];
        }
        Self { rows, cols, row_ptr, col_idx, values }
    }

    /// Builds a matrix from sorted, zero-free rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<(u32, i64)>>) -> Self {
        let mut m = Self::zero(0, cols);
        m.rows = rows.len();
        m.row_ptr = Vec::with_capacity(rows.len() + 1);
        m.row_ptr.push(0);
        for row in rows {
            for (c, v) in row {
                debug_assert!(v != 0 && (c as usize) < cols);
                m.col_idx.push(c);
                m.values.push(v);
            }
            m.row_ptr.push(m.col_idx.len());
        }
        m
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let cols = dense.first().map_or(0, |r| r.len());
        let rows = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect())
            .collect();
        Self::from_rows(cols, rows)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, row) in d.iter_mut().enumerate() {
            for (c, v) in self.row(r) {
                row[c] = v;
            }
        }
        d
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

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.col_idx[span.clone()].iter().zip(&self.values[span]).map(|(&c, &v)| (c as usize, v))
    }

    pub fn row_len(&self, r: usize) -> usize {
        self.row_ptr[r + 1] - self.row_ptr[r]
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        match self.col_idx[span.clone()].binary_search(&(c as u32)) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0,
        }
    }

    /// All nonzero entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.rows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.col_idx {
            counts[c as usize + 1] += 1;
        }
        for c in 0..self.cols {
            counts[c + 1] += counts[c];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0u32; self.nnz()];
        let mut values = vec![0i64; self.nnz()];
        for r in 0..self.rows {
            for (c, v) in self.row(r) {
                let k = next[c];
                next[c] += 1;
                col_idx[k] = r as u32;
                values[k] = v;
            }
        }
        Self { rows: self.cols, cols: self.rows, row_ptr, col_idx, values }
    }

    /// Matrix product `self · other`. Panics on `i64` overflow.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut acc = vec![0i64; other.cols];
        let mut mark = vec![usize::MAX; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut out_rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            touched.clear();
            for (k, a) in self.row(r) {
                for (c, b) in other.row(k) {
                    if mark[c] != r {
                        mark[c] = r;
                        acc[c] = 0;
                        touched.push(c);
                    }
                    let prod = a.checked_mul(b).expect("sparse product overflow");
                    acc[c] = acc[c].checked_add(prod).expect("sparse product overflow");
                }
            }
            touched.sort_unstable();
            out_rows.push(touched.iter().filter(|&&c| acc[c] != 0).map(|&c| (c as u32, acc[c])).collect());
        }
        Self::from_rows(other.cols, out_rows)
    }

    pub fn scale(&self, k: i64) -> SparseMatrix {
        if k == 0 {
            return Self::zero(self.rows, self.cols);
        }
        let mut m = self.clone();
        m.values.iter_mut().for_each(|v| *v = v.checked_mul(k).expect("sparse scale overflow"));
        m
    }

    /// `self − other`.
    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        let trip: Vec<_> = self.triplets().chain(other.triplets().map(|(r, c, v)| (r, c, -v))).collect();
        Self::from_triplets(self.rows, self.cols, trip)
    }

    /// Applies the matrix to a vector over any module the integers act on.
    pub fn apply<T, F>(&self, v: &[T], zero: &T, mut axpy: F) -> Vec<T>
    where
        T: Clone,
        F: FnMut(&mut T, i64, &T),
    {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = zero.clone();
                for (c, a) in self.row(r) {
                    axpy(&mut acc, a, &v[c]);
                }
                acc
            })
            .collect()
    }

    pub fn apply_i64(&self, v: &[i64]) -> Vec<i64> {
        self.apply(v, &0, |acc, a, x| *acc += a * x)
    }

    /// Places blocks at row/column offsets into one matrix of the given shape.
    pub fn assemble(rows: usize, cols: usize, blocks: &[(usize, usize, &SparseMatrix)]) -> SparseMatrix {
        let mut out_rows: Vec<Vec<(u32, i64)>> = vec![Vec::new(); rows];
        for &(r0, c0, b) in blocks {
            assert!(r0 + b.rows <= rows && c0 + b.cols <= cols, "block outside target");
            for r in 0..b.rows {
                out_rows[r0 + r].extend(b.row(r).map(|(c, v)| ((c0 + c) as u32, v)));
            }
        }
        let trip = out_rows
            .into_iter()
            .enumerate()
            .flat_map(|(r, row)| row.into_iter().map(move |(c, v)| (r, c as usize, v)))
            .collect();
        Self::from_triplets(rows, cols, trip)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_cancel_and_sum() {
        let m = SparseMatrix::from_triplets(2, 3, vec![(0, 1, 2), (0, 1, -2), (1, 2, 1), (1, 2, 3), (0, 0, 5)]);
        assert_eq!(m.to_dense(), vec![vec![5, 0, 0], vec![0, 0, 4]]);
        assert_eq!(m.nnz(), 2);
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, -1], vec![3, 0]]);
        let b = SparseMatrix::from_dense(&[vec![1, 0, 1], vec![1, 1, 0]]);
        assert_eq!(a.mul(&b).to_dense(), vec![vec![3, 2, 1], vec![-1, -1, 0], vec![3, 0, 3]]);
        assert_eq!(a.transpose().to_dense(), vec![vec![1, 0, 3], vec![2, -1, 0]]);
        assert_eq!(a.mul(&b).sub(&a.mul(&b)).nnz(), 0);
    }

    #[test]
    fn assemble_blocks() {
        let i2 = SparseMatrix::identity(2);
        let m = SparseMatrix::assemble(3, 4, &[(0, 0, &i2), (1, 2, &i2.scale(-1))]);
        assert_eq!(m.to_dense(), vec![vec![1, 0, 0, 0], vec![0, 1, -1, 0], vec![0, 0, 0, -1]]);
    }
}
