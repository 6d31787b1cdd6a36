//! Subquotients `ker B / im A` of free modules, for `X --A--> Y --B--> Z` with `BA = 0`.
//!
//! Unit pivots are eliminated sparsely first. Each elimination is a homotopy equivalence of
//! the three-term complex, and the maps `π: Y → Y'` and `ι: Y' → Y` are kept so that
//! generators and the class-reading functional can be carried back to the original basis.
//! What remains goes through dense Smith reductions.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::snf::{smith_normal_form, IntMatrix, Track};
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("shape mismatch: A is {a:?}, B is {b:?}")]
    Shape { a: (usize, usize), b: (usize, usize) },
    #[error("B·A is not zero")]
    NotAComplex,
    #[error("integer overflow during sparse elimination")]
    Overflow,
}

type SparseVec = Vec<(u32, i64)>;

/// `a + k·b` on sorted sparse vectors, dropping zeros.
fn axpy(a: &SparseVec, k: i64, b: &SparseVec) -> Result<SparseVec, ReduceError> {
    axpy_fill(a, k, b, &mut |_| {})
}

/// [`axpy`], reporting each index where `a` had no entry and the result has one.
fn axpy_fill(a: &SparseVec, k: i64, b: &SparseVec, fill: &mut impl FnMut(u32)) -> Result<SparseVec, ReduceError> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                i += 1;
                j += 1;
                let prod = k.checked_mul(vb).ok_or(ReduceError::Overflow)?;
                (ca, va.checked_add(prod).ok_or(ReduceError::Overflow)?)
            }
            (Some(&(ca, va)), Some(&(cb, _))) if ca < cb => {
                i += 1;
                (ca, va)
            }
            (Some(&(ca, va)), None) => {
                i += 1;
                (ca, va)
            }
            (_, Some(&(cb, vb))) => {
                j += 1;
                fill(cb);
                (cb, k.checked_mul(vb).ok_or(ReduceError::Overflow)?)
            }
            (None, None) => unreachable!(),
        };
        if next.1 != 0 {
            out.push(next);
        }
    }
    Ok(out)
}

/// Row-major sparse matrix with lazily maintained column supports.
struct DynMatrix {
    rows: Vec<SparseVec>,
    col_rows: Vec<Vec<u32>>,
    row_alive: Vec<bool>,
    col_alive: Vec<bool>,
}

/// A performed elimination of the unit entry `φ` at `(row, col)`.
struct Pivot {
    row: usize,
    col: usize,
    phi: i64,
    /// other entries of the pivot column, by row
    column: SparseVec,
    /// other entries of the pivot row, by column
    row_entries: SparseVec,
}

impl DynMatrix {
    fn new(m: &SparseMatrix) -> Self {
        let rows: Vec<SparseVec> = (0..m.rows()).map(|r| m.row(r).map(|(c, v)| (c as u32, v)).collect()).collect();
        let mut col_rows = vec![Vec::new(); m.cols()];
        for (r, row) in rows.iter().enumerate() {
            for &(c, _) in row {
                col_rows[c as usize].push(r as u32);
            }
        }
        Self { rows, col_rows, row_alive: vec![true; m.rows()], col_alive: vec![true; m.cols()] }
    }

    fn entry(&self, r: usize, c: u32) -> i64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |&(cc, _)| cc).map_or(0, |k| row[k].1)
    }

    /// Current nonzero entries of column `c`; refreshes the stored support.
    fn column(&mut self, c: usize) -> SparseVec {
        let mut sup = std::mem::take(&mut self.col_rows[c]);
        sup.sort_unstable();
        sup.dedup();
        let entries: SparseVec = sup
            .iter()
            .filter(|&&r| self.row_alive[r as usize])
            .map(|&r| (r, self.entry(r as usize, c as u32)))
            .filter(|&(_, v)| v != 0)
            .collect();
        self.col_rows[c] = entries.iter().map(|&(r, _)| r).collect();
        entries
    }

    fn eliminate(&mut self, row: usize, col: usize) -> Result<Pivot, ReduceError> {
        let column = self.column(col);
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let phi = self.entry_in(&pivot_row, col as u32);
        debug_assert!(phi.abs() == 1);
        for &(r, e) in &column {
            let r = r as usize;
            if r == row {
                continue;
            }
            // row_r −= e·φ⁻¹·row_pivot, with φ⁻¹ = φ
            let k = -(e * phi);
            let col_rows = &mut self.col_rows;
            self.rows[r] = axpy_fill(&self.rows[r], k, &pivot_row, &mut |c| col_rows[c as usize].push(r as u32))?;
        }
        self.row_alive[row] = false;
        self.col_alive[col] = false;
        self.col_rows[col].clear();
        Ok(Pivot {
            row,
            col,
            phi,
            column: column.into_iter().filter(|&(r, _)| r as usize != row).collect(),
            row_entries: pivot_row.into_iter().filter(|&(c, _)| c as usize != col).collect(),
        })
    }

    fn entry_in(&self, row: &SparseVec, c: u32) -> i64 {
        row.binary_search_by_key(&c, |&(cc, _)| cc).map_or(0, |k| row[k].1)
    }

    /// Cheapest unit pivot in column `c` by Markowitz cost `(row length − 1)·(column length − 1)`.
    fn best_pivot(&mut self, c: usize) -> Option<(u64, usize)> {
        let entries = self.column(c);
        let len = (entries.len() as u64).saturating_sub(1);
        entries
            .iter()
            .filter(|&&(_, v)| v.abs() == 1)
            .map(|&(r, _)| ((self.rows[r as usize].len() as u64 - 1) * len, r as usize))
            .min()
    }

    /// Eliminates unit pivots until none remain, calling `on_pivot` after each one.
    fn reduce<F>(&mut self, mut on_pivot: F) -> Result<(), ReduceError>
    where
        F: FnMut(&Pivot) -> Result<(), ReduceError>,
    {
        loop {
            let mut heap = BinaryHeap::new();
            for c in 0..self.col_alive.len() {
                if self.col_alive[c] {
                    if let Some((cost, _)) = self.best_pivot(c) {
                        heap.push(Reverse((cost, c)));
                    }
                }
            }
            if heap.is_empty() {
                return Ok(());
            }
            while let Some(Reverse((cost, c))) = heap.pop() {
                if !self.col_alive[c] {
                    continue;
                }
                let Some((now, r)) = self.best_pivot(c) else { continue };
                if now > cost {
                    heap.push(Reverse((now, c)));
                    continue;
                }
                let p = self.eliminate(r, c)?;
                on_pivot(&p)?;
            }
        }
    }
}

/// Elimination on whichever orientation of the matrix has the shorter rows, since row
/// merges dominate the cost. Pivots and entries are reported in the original orientation.
struct Eliminator {
    inner: DynMatrix,
    transposed: bool,
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let transposed = m.rows() < m.cols();
        let inner = if transposed { DynMatrix::new(&m.transpose()) } else { DynMatrix::new(m) };
        Self { inner, transposed }
    }

    fn reduce<F>(&mut self, mut on_pivot: F) -> Result<(), ReduceError>
    where
        F: FnMut(&Pivot) -> Result<(), ReduceError>,
    {
        let transposed = self.transposed;
        self.inner.reduce(|p| {
            if transposed {
                on_pivot(&Pivot {
                    row: p.col,
                    col: p.row,
                    phi: p.phi,
                    column: p.row_entries.clone(),
                    row_entries: p.column.clone(),
                })
            } else {
                on_pivot(p)
            }
        })
    }

    /// Surviving nonzero entries `(row, col, value)`.
    fn entries(&self) -> Vec<(usize, usize, i64)> {
        let d = &self.inner;
        let mut out = Vec::new();
        for (r, row) in d.rows.iter().enumerate() {
            if !d.row_alive[r] {
                continue;
            }
            for &(c, v) in row {
                let (i, j) = if self.transposed { (c as usize, r) } else { (r, c as usize) };
                out.push((i, j, v));
            }
        }
        out
    }
}

/// Finitely generated subquotient `ker B / im A ≅ ⊕ ℤ/d_i ⊕ ℤ^r` of `ℤ^dim`.
///
/// Coordinates list the torsion summands first (in divisibility order), then the free ones.
#[derive(Debug, Clone)]
pub struct Subquotient {
    pub dim: usize,
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
    /// One vector of `ker B` per coordinate.
    pub generators: Vec<Vec<BigInt>>,
    /// Rows `P` with `P·g_j = e_j` and `P·A ≡ 0` (modulo the torsion orders).
    pub classifier: Vec<Vec<BigInt>>,
}

impl Subquotient {
    pub fn num_coords(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    /// Order of coordinate `i`, or `None` for a free coordinate.
    pub fn order(&self, i: usize) -> Option<&BigInt> {
        self.torsion.get(i)
    }

    /// Coordinates of the class of `y ∈ ker B`.
    pub fn classify(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(y.len(), self.dim, "vector length mismatch");
        self.classifier
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let v: BigInt = p.iter().zip(y).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum();
                match self.order(i) {
                    Some(d) => v.mod_floor(d),
                    None => v,
                }
            })
            .collect()
    }

    /// Reduces coordinates into canonical range.
    pub fn normalize(&self, coords: &mut [BigInt]) {
        for (i, c) in coords.iter_mut().enumerate() {
            if let Some(d) = self.order(i) {
                *c = c.mod_floor(d);
            }
        }
    }

    /// A vector of `ker B` with the given coordinates.
    pub fn element(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(coords.len(), self.num_coords(), "coordinate count mismatch");
        let mut out = vec![BigInt::zero(); self.dim];
        for (c, g) in coords.iter().zip(&self.generators) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(g) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        out
    }
}

/// A homotopy-equivalent small model of `X --A--> Y --B--> Z` after unit-pivot elimination.
///
/// `A'` and `B'` keep only their nonzero columns and rows respectively, which changes neither
/// `im A'` nor `ker B'`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub dim: usize,
    /// `A': Y' ← X'`
    pub a: IntMatrix,
    /// `B': Z' ← Y'`
    pub b: IntMatrix,
    /// surviving basis vectors of `Y`
    ys: Vec<usize>,
    /// `π: Y → Y'`, one sparse row per surviving basis vector, indexed by original `y`
    pi: Vec<SparseVec>,
    /// `ι: Y' → Y`, one sparse column per surviving basis vector, indexed by original `y`
    iota: Vec<SparseVec>,
}

impl Reduction {
    /// `dim Y'`.
    pub fn reduced_dim(&self) -> usize {
        self.ys.len()
    }

    /// `π·y`.
    pub fn project(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(y.len(), self.dim, "vector length mismatch");
        self.ys
            .iter()
            .map(|&k| self.pi[k].iter().filter(|&&(j, _)| !y[j as usize].is_zero()).map(|&(j, v)| &y[j as usize] * v).sum())
            .collect()
    }

    /// `ι·y'`.
    pub fn include(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(y.len(), self.ys.len(), "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.dim];
        for (c, &k) in y.iter().zip(&self.ys) {
            if c.is_zero() {
                continue;
            }
            for &(i, v) in &self.iota[k] {
                out[i as usize] += c * BigInt::from(v);
            }
        }
        out
    }

    /// `p'·π` for a row vector `p'` on `Y'`.
    pub fn pull_back_row(&self, p: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.dim];
        for (c, &k) in p.iter().zip(&self.ys) {
            if c.is_zero() {
                continue;
            }
            for &(j, v) in &self.pi[k] {
                out[j as usize] += c * BigInt::from(v);
            }
        }
        out
    }

    /// A subquotient of the reduced model, carried back to `Y`.
    pub fn carry_back(&self, dense: Subquotient) -> Subquotient {
        let generators = dense.generators.iter().map(|g| self.include(g)).collect();
        let classifier = dense.classifier.iter().map(|p| self.pull_back_row(p)).collect();
        Subquotient { dim: self.dim, torsion: dense.torsion, free_rank: dense.free_rank, generators, classifier }
    }
}

/// Eliminates unit pivots of `A` and then of `B`, keeping the comparison maps.
pub fn reduce_pair(a: &SparseMatrix, b: &SparseMatrix) -> Result<Reduction, ReduceError> {
    let dim = a.rows();
    if b.cols() != dim {
        return Err(ReduceError::Shape { a: a.shape(), b: b.shape() });
    }
    if !b.mul(a).is_zero() {
        return Err(ReduceError::NotAComplex);
    }
    let mut pi: Vec<SparseVec> = (0..dim as u32).map(|i| vec![(i, 1)]).collect();
    let mut iota: Vec<SparseVec> = (0..dim as u32).map(|i| vec![(i, 1)]).collect();
    let mut y_alive = vec![true; dim];

    // pivots of A: eliminated y plays the target role
    let mut da = Eliminator::new(a);
    da.reduce(|p| {
        let y = p.row;
        let py = std::mem::take(&mut pi[y]);
        for &(c, e) in &p.column {
            pi[c as usize] = axpy(&pi[c as usize], -(e * p.phi), &py)?;
        }
        iota[y].clear();
        y_alive[y] = false;
        Ok(())
    })?;

    // pivots of B, on the surviving columns: eliminated y plays the source role
    let b_cut = {
        let trip = b.triplets().filter(|&(_, c, _)| y_alive[c]).collect();
        SparseMatrix::from_triplets(b.rows(), b.cols(), trip)
    };
    let mut db = Eliminator::new(&b_cut);
    db.reduce(|p| {
        let y = p.col;
        let iy = std::mem::take(&mut iota[y]);
        for &(c, g) in &p.row_entries {
            iota[c as usize] = axpy(&iota[c as usize], -(g * p.phi), &iy)?;
        }
        pi[y].clear();
        y_alive[y] = false;
        Ok(())
    })?;

    let ys: Vec<usize> = (0..dim).filter(|&y| y_alive[y]).collect();
    let mut pos = vec![usize::MAX; dim];
    for (k, &y) in ys.iter().enumerate() {
        pos[y] = k;
    }
    let m = ys.len();

    // rows of A dropped by B pivots leave the complex
    let a_left: Vec<_> = da.entries().into_iter().filter(|&(y, _, _)| y_alive[y]).collect();
    let mut xs: Vec<usize> = a_left.iter().map(|&(_, x, _)| x).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut a_red = IntMatrix::zeros(m, xs.len());
    for &(y, x, v) in &a_left {
        a_red[(pos[y], xs.binary_search(&x).unwrap())] = BigInt::from(v);
    }
    let b_left = db.entries();
    let mut zs: Vec<usize> = b_left.iter().map(|&(z, _, _)| z).collect();
    zs.sort_unstable();
    zs.dedup();
    let mut b_red = IntMatrix::zeros(zs.len(), m);
    for &(z, y, v) in &b_left {
        b_red[(zs.binary_search(&z).unwrap(), pos[y])] = BigInt::from(v);
    }
    Ok(Reduction { dim, a: a_red, b: b_red, ys, pi, iota })
}

/// Computes `ker B / im A` for `A: X → Y` (`dim Y × dim X`) and `B: Y → Z` (`dim Z × dim Y`).
pub fn subquotient(a: &SparseMatrix, b: &SparseMatrix) -> Result<Subquotient, ReduceError> {
    let red = reduce_pair(a, b)?;
    let dense = dense_subquotient(&red.a, &red.b);
    Ok(red.carry_back(dense))
}

/// Dense version of [`subquotient`] for `A: m × x` and `B: z × m` with `BA = 0`.
pub fn dense_subquotient(a: &IntMatrix, b: &IntMatrix) -> Subquotient {
    let m = a.rows();
    // U·A·V = S; in w = U·y coordinates im A = ⊕ s_i ℤ e_i
    let sa = smith_normal_form(a, Track { left: true, left_inverse: true, right: false, right_inverse: false });
    let r = sa.rank;
    let u = sa.u.unwrap();
    let u_inv = sa.u_inv.unwrap();
    let rest: Vec<usize> = (r..m).collect();
    let all_rows: Vec<usize> = (0..b.rows()).collect();
    // kernel of B·U⁻¹ on the coordinates r..m
    let b_rest = b.mul(&u_inv).select(&all_rows, &rest);
    let sb = smith_normal_form(&b_rest, Track { left: false, left_inverse: false, right: true, right_inverse: true });
    let v2 = sb.v.unwrap();
    let v2_inv = sb.v_inv.unwrap();
    let kdim = rest.len();
    let free: Vec<usize> = (sb.rank..kdim).collect();

    let mut torsion = Vec::new();
    let mut generators = Vec::new();
    let mut classifier = Vec::new();
    for i in 0..r {
        let s = &sa.s[(i, i)];
        if !s.is_one() {
            torsion.push(s.clone());
            generators.push(u_inv.column(i));
            classifier.push(u.row(i).to_vec());
        }
    }
    for &j in &free {
        // w = (0, V2 e_j)
        let mut w = vec![BigInt::zero(); m];
        for k in 0..kdim {
            w[r + k] = v2[(k, j)].clone();
        }
        generators.push(u_inv.mul_vec(&w));
        // row j of V2⁻¹ applied to the rest of U·y
        let mut row = vec![BigInt::zero(); m];
        for k in 0..kdim {
            let c = &v2_inv[(j, k)];
            if c.is_zero() {
                continue;
            }
            for (o, x) in row.iter_mut().zip(u.row(r + k)) {
                if !x.is_zero() {
                    *o += c * x;
                }
            }
        }
        classifier.push(row);
    }
    // keep the classifier entries small
    for (i, p) in classifier.iter_mut().enumerate() {
        if let Some(d) = torsion.get(i) {
            p.iter_mut().for_each(|x| *x = x.mod_floor(d));
        }
    }
    Subquotient { dim: m, torsion, free_rank: free.len(), generators, classifier }
}

/// Invariant factors of a sparse matrix (the nonzero Smith diagonal).
pub fn invariant_factors(m: &SparseMatrix) -> Result<Vec<BigInt>, ReduceError> {
    let mut d = Eliminator::new(m);
    let mut units = 0usize;
    d.reduce(|_| {
        units += 1;
        Ok(())
    })?;
    let left = d.entries();
    let mut rows: Vec<usize> = left.iter().map(|&(r, _, _)| r).collect();
    let mut cols: Vec<usize> = left.iter().map(|&(_, c, _)| c).collect();
    for v in [&mut rows, &mut cols] {
        v.sort_unstable();
        v.dedup();
    }
    let mut dense = IntMatrix::zeros(rows.len(), cols.len());
    for &(r, c, v) in &left {
        dense[(rows.binary_search(&r).unwrap(), cols.binary_search(&c).unwrap())] = BigInt::from(v);
    }
    let s = smith_normal_form(&dense, Track::NONE);
    let mut out = vec![BigInt::one(); units];
    out.extend(s.diagonal());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn multiplication_by_two() {
        // 0 → ℤ --2--> ℤ → 0
        let a = SparseMatrix::from_dense(&[vec![2]]);
        let b = SparseMatrix::zero(0, 1);
        let sq = subquotient(&a, &b).unwrap();
        assert_eq!(sq.torsion, big(&[2]));
        assert_eq!(sq.free_rank, 0);
        assert_eq!(sq.classify(&big(&[3])), big(&[1]));
        assert_eq!(sq.classify(&big(&[4])), big(&[0]));
    }

    #[test]
    fn free_and_torsion() {
        // Y = ℤ³, im A = span(e0 + e1, 2 e2), ker B = Y
        let a = SparseMatrix::from_dense(&[vec![1, 0], vec![1, 0], vec![0, 2]]);
        let b = SparseMatrix::zero(1, 3);
        let sq = subquotient(&a, &b).unwrap();
        assert_eq!(sq.torsion, big(&[2]));
        assert_eq!(sq.free_rank, 1);
        for (j, g) in sq.generators.iter().enumerate() {
            let mut e = vec![BigInt::zero(); 2];
            e[j] = BigInt::one();
            assert_eq!(sq.classify(g), e);
        }
        // e0 − e1 is a boundary-free class, e0 + e1 is a boundary
        assert_eq!(sq.classify(&big(&[1, 1, 0])), big(&[0, 0]));
        assert_eq!(sq.classify(&big(&[0, 0, 2])), big(&[0, 0]));
        assert_ne!(sq.classify(&big(&[0, 0, 1])), big(&[0, 0]));
    }

    #[test]
    fn kernel_of_b() {
        // B = [1 1 0; 0 0 3]; ker B = span(e0 − e1); A = 0
        let a = SparseMatrix::zero(3, 0);
        let b = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![0, 0, 3]]);
        let sq = subquotient(&a, &b).unwrap();
        assert_eq!(sq.free_rank, 1);
        assert!(sq.torsion.is_empty());
        let g = &sq.generators[0];
        assert_eq!(g[0].clone() + &g[1], BigInt::zero());
        assert!(g[2].is_zero());
        assert_eq!(sq.classify(g), big(&[1]));
    }

    #[test]
    fn rejects_non_complex() {
        let a = SparseMatrix::from_dense(&[vec![1]]);
        let b = SparseMatrix::from_dense(&[vec![1]]);
        assert_eq!(subquotient(&a, &b).unwrap_err(), ReduceError::NotAComplex);
    }

    #[test]
    fn invariant_factors_match_dense() {
        let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16], vec![1, 0, 0]]);
        let f = invariant_factors(&m).unwrap();
        let s = smith_normal_form(&IntMatrix::from_sparse(&m), Track::NONE);
        assert_eq!(f, s.diagonal());
    }
}
