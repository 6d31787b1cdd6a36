//! Dense integer matrices, Smith normal form and Hermite normal form over `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        Self::from_rows_with_cols(rows, rows.first().map_or(0, |r| r.len()))
    }

    /// Like [`Self::from_rows`], keeping the width when `rows` is empty.
    pub fn from_rows_with_cols<T: Into<BigInt> + Clone>(rows: &[Vec<T>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn from_sparse(s: &crate::sparse::SparseMatrix) -> Self {
        let mut m = Self::zeros(s.rows(), s.cols());
        for (r, c, v) in s.triplets() {
            m[(r, c)] = BigInt::from(v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Sub-block of rows `r` and columns `c`.
    pub fn select(&self, r: &[usize], c: &[usize]) -> IntMatrix {
        let mut m = Self::zeros(r.len(), c.len());
        for (i, &ri) in r.iter().enumerate() {
            for (j, &cj) in c.iter().enumerate() {
                m[(i, j)] = self[(ri, cj)].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row_dst += k · row_src`.
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j];
            if !v.is_zero() {
                let add = v * k;
                self.data[dst * self.cols + j] += add;
            }
        }
    }

    /// `col_dst += k · col_src`.
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src];
            if !v.is_zero() {
                let add = v * k;
                self.data[i * self.cols + dst] += add;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * prev
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Which unimodular transforms to record during a Smith reduction.
#[derive(Debug, Clone, Copy, Default)]
pub struct Track {
    pub left: bool,
    pub left_inverse: bool,
    pub right: bool,
    pub right_inverse: bool,
}

impl Track {
    pub const ALL: Track = Track { left: true, left_inverse: true, right: true, right_inverse: true };
    pub const NONE: Track = Track { left: false, left_inverse: false, right: false, right_inverse: false };
}

/// Result of a Smith reduction: `U·M·V = S`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub s: IntMatrix,
    pub u: Option<IntMatrix>,
    pub u_inv: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub v_inv: Option<IntMatrix>,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s[(i, i)].clone()).collect()
    }
}

struct Reducer {
    a: IntMatrix,
    u: Option<IntMatrix>,
    u_inv: Option<IntMatrix>,
    v: Option<IntMatrix>,
    v_inv: Option<IntMatrix>,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    /// `row_dst += k · row_src`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_row(dst, src, k);
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, k);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col(src, dst, &-k);
        }
    }

    /// `col_dst += k · col_src`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.a.add_col(dst, src, k);
        if let Some(v) = &mut self.v {
            v.add_col(dst, src, k);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row(src, dst, &-k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    /// Position of the smallest nonzero entry in the block `[t.., t..]`.
    fn smallest(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < self.a[(bi, bj)].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Clears row and column `t` outside the pivot; returns false when the pivot moved.
    fn clear_cross(&mut self, t: usize) -> bool {
        let (m, n) = (self.a.rows, self.a.cols);
        for i in t + 1..m {
            if !self.a[(i, t)].is_zero() {
                let q = &self.a[(i, t)] / &self.a[(t, t)];
                self.add_row(i, t, &-q);
            }
        }
        for j in t + 1..n {
            if !self.a[(t, j)].is_zero() {
                let q = &self.a[(t, j)] / &self.a[(t, t)];
                self.add_col(j, t, &-q);
            }
        }
        // leftover remainders are strictly smaller than the pivot
        let mut best: Option<(usize, bool)> = None;
        let mut best_abs = self.a[(t, t)].abs();
        for i in t + 1..m {
            let x = self.a[(i, t)].abs();
            if !x.is_zero() && x < best_abs {
                best_abs = x;
                best = Some((i, true));
            }
        }
        for j in t + 1..n {
            let x = self.a[(t, j)].abs();
            if !x.is_zero() && x < best_abs {
                best_abs = x;
                best = Some((j, false));
            }
        }
        match best {
            None => true,
            Some((i, true)) => {
                self.swap_rows(t, i);
                false
            }
            Some((j, false)) => {
                self.swap_cols(t, j);
                false
            }
        }
    }
}

/// Smith normal form with smallest-entry pivoting.
pub fn smith_normal_form(m: &IntMatrix, track: Track) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut r = Reducer {
        a: m.clone(),
        u: track.left.then(|| IntMatrix::identity(rows)),
        u_inv: track.left_inverse.then(|| IntMatrix::identity(rows)),
        v: track.right.then(|| IntMatrix::identity(cols)),
        v_inv: track.right_inverse.then(|| IntMatrix::identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = r.smallest(t) else { break };
        r.swap_rows(t, pi);
        r.swap_cols(t, pj);
        loop {
            if !r.clear_cross(t) {
                continue;
            }
            // the pivot must divide the rest of the block
            let pivot = r.a[(t, t)].clone();
            let bad = if pivot.abs().is_one() {
                None
            } else {
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !r.a[(i, j)].is_multiple_of(&pivot)))
            };
            match bad {
                Some(i) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.a[(t, t)].is_negative() {
            r.negate_row(t);
        }
        t += 1;
    }
    Smith { s: r.a, u: r.u, u_inv: r.u_inv, v: r.v, v_inv: r.v_inv, rank: t }
}

/// Row Hermite normal form of the lattice spanned by `gens` in `ℤ^dim`:
/// nonzero rows only, positive pivots, entries above each pivot reduced into `[0, pivot)`.
pub fn lattice_hnf(gens: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut col = 0;
    while col < dim && !rows.is_empty() {
        // gcd-combine all rows with a nonzero entry in `col`
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nz {
                if i != p {
                    let q = &rows[i][col] / &rows[p][col];
                    let (src, dst) = if i < p {
                        let (a, b) = rows.split_at_mut(p);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = rows.split_at_mut(i);
                        (&a[p], &mut b[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d -= &q * s;
                    }
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| !rows[i][col].is_zero()) {
            let mut r = rows.swap_remove(p);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            basis.push(r);
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        col += 1;
    }
    // reduce entries above pivots
    for k in 0..basis.len() {
        let pc = basis[k].iter().position(|x| !x.is_zero()).unwrap();
        for i in 0..k {
            let q = basis[i][pc].div_floor(&basis[k][pc]);
            if !q.is_zero() {
                let src = basis[k].clone();
                for (d, s) in basis[i].iter_mut().zip(&src) {
                    *d -= &q * s;
                }
            }
        }
    }
    basis
}

/// Whether `v` lies in the lattice with Hermite basis `hnf`.
pub fn lattice_contains(hnf: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    let mut v = v.to_vec();
    for row in hnf {
        let pc = row.iter().position(|x| !x.is_zero()).unwrap();
        if v[..pc].iter().any(|x| !x.is_zero()) {
            return false;
        }
        let (q, r) = v[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return false;
        }
        for (d, s) in v.iter_mut().zip(row) {
            *d -= &q * s;
        }
    }
    v.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn check(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a, Track::ALL);
        let (u, v) = (s.u.as_ref().unwrap(), s.v.as_ref().unwrap());
        assert_eq!(&u.mul(a).mul(v), &s.s);
        assert_eq!(u.mul(s.u_inv.as_ref().unwrap()), IntMatrix::identity(a.rows()));
        assert_eq!(v.mul(s.v_inv.as_ref().unwrap()), IntMatrix::identity(a.cols()));
        let d = s.diagonal();
        for w in d.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn small_cases() {
        let s = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let z = IntMatrix::zeros(3, 2);
        let s = check(&z);
        assert_eq!(s.rank, 0);
        assert_eq!(s.u.unwrap(), IntMatrix::identity(3));
        let s = check(&IntMatrix::identity(4));
        assert_eq!(s.s, IntMatrix::identity(4));
        let s = check(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn determinants() {
        assert_eq!(m(&[vec![2, 1], vec![1, 1]]).determinant(), BigInt::from(1));
        assert_eq!(m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 5]]).determinant(), BigInt::from(-5));
    }

    #[test]
    fn hnf_is_canonical() {
        let a = vec![vec![2, 4].into_iter().map(BigInt::from).collect(), vec![0, 6].into_iter().map(BigInt::from).collect()];
        let b = vec![
            vec![2, -2].into_iter().map(BigInt::from).collect::<Vec<_>>(),
            vec![4, 2].into_iter().map(BigInt::from).collect(),
            vec![0, 0].into_iter().map(BigInt::from).collect(),
        ];
        assert_eq!(lattice_hnf(&a, 2), lattice_hnf(&b, 2));
        let h = lattice_hnf(&a, 2);
        assert!(lattice_contains(&h, &[BigInt::from(2), BigInt::from(-2)]));
        assert!(!lattice_contains(&h, &[BigInt::from(1), BigInt::from(0)]));
    }
}
