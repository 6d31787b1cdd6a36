//! Cochain maps between the complexes of a matched pair.

use std::collections::BTreeMap;

use thiserror::Error;

use super::complex::{factor_elements, tuple_rank, CochainComplex, Factor};
use super::grid::{gamma_size, monotone_paths, Grid};
use crate::matched_pair::MatchedPair;
use crate::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainMapError {
    #[error("not a chain map at degree {degree}: max |violation| {max_violation}")]
    NotAChainMap { degree: i32, max_violation: i64 },
    #[error("map at degree {degree} has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { degree: i32, got: (usize, usize), expected: (usize, usize) },
}

/// A family of matrices `f_n: A^n → B^{n+shift}`.
#[derive(Debug, Clone, Default)]
pub struct ChainMap {
    pub shift: i32,
    pub maps: BTreeMap<i32, SparseMatrix>,
}

impl ChainMap {
    pub fn new(shift: i32) -> Self {
        Self { shift, maps: BTreeMap::new() }
    }

    pub fn with(mut self, n: i32, m: SparseMatrix) -> Self {
        self.maps.insert(n, m);
        self
    }

    pub fn get(&self, n: i32) -> Option<&SparseMatrix> {
        self.maps.get(&n)
    }

    /// Identity map on the stored degrees of a complex.
    pub fn identity(c: &CochainComplex) -> Self {
        let mut f = Self::new(0);
        for n in c.n_min()..=c.n_max() {
            f.maps.insert(n, SparseMatrix::identity(c.rank(n)));
        }
        f
    }

    /// `g ∘ f` on the degrees where both are defined.
    pub fn then(&self, g: &ChainMap) -> ChainMap {
        let mut h = ChainMap::new(self.shift + g.shift);
        for (&n, f) in &self.maps {
            if let Some(gm) = g.maps.get(&(n + self.shift)) {
                h.maps.insert(n, gm.mul(f));
            }
        }
        h
    }

    /// Checks shapes and `d_B f_n = f_{n+1} d_A` wherever both sides are stored.
    pub fn check(&self, source: &CochainComplex, target: &CochainComplex) -> Result<(), ChainMapError> {
        for (&n, f) in &self.maps {
            let expected = (target.rank(n + self.shift), source.rank(n));
            if f.shape() != expected {
                return Err(ChainMapError::ShapeMismatch { degree: n, got: f.shape(), expected });
            }
        }
        for (&n, f) in &self.maps {
            let Some(f_next) = self.maps.get(&(n + 1)) else { continue };
            let (Some(da), Some(db)) = (source.differential(n), target.differential(n + self.shift)) else {
                continue;
            };
            let diff = db.mul(f).sub(&f_next.mul(da));
            if !diff.is_zero() {
                return Err(ChainMapError::NotAChainMap { degree: n, max_violation: diff.max_abs() });
            }
        }
        Ok(())
    }
}

/// Offsets of the blocks `Γ_{p,n−p}`, p = 0..=n, inside `D^n`.
fn d_offsets(mp: &MatchedPair, n: usize) -> (Vec<usize>, usize) {
    let mut off = Vec::with_capacity(n + 1);
    let mut acc = 0;
    for p in 0..=n {
        off.push(acc);
        acc += gamma_size(mp, p, n - p).unwrap() as usize;
    }
    (off, acc)
}

/// Offsets of the blocks `Γ_{p,n+1−p}`, p = 1..=n, inside `C^n` (indexed by p).
fn c_offsets(mp: &MatchedPair, n: usize) -> (Vec<usize>, usize) {
    let mut off = vec![0; n + 1];
    let mut acc = 0;
    for (p, o) in off.iter_mut().enumerate().skip(1) {
        *o = acc;
        acc += gamma_size(mp, p, n + 1 - p).unwrap() as usize;
    }
    (off, acc)
}

fn pow(k: usize, n: usize) -> usize {
    k.pow(n as u32)
}

/// `I: L(G^n) → D^n`, signed sum over monotone paths.
pub fn transform_i(mp: &MatchedPair, n: usize) -> SparseMatrix {
    let (off, rows) = d_offsets(mp, n);
    let cols = pow(mp.order(), n);
    let mut trip = Vec::new();
    for p in 0..=n {
        let q = n - p;
        let paths = monotone_paths(p, q);
        for k in 0..gamma_size(mp, p, q).unwrap() {
            let x = Grid::unrank_unchecked(mp, p, q, k);
            for path in &paths {
                let (word, neg) = x.path(path);
                let col = tuple_rank(mp, Factor::G, &word);
                trip.push((off[p] + k as usize, col, if neg { -1 } else { 1 }));
            }
        }
    }
    SparseMatrix::from_triplets(rows, cols, trip)
}

/// `I′: D^n → L(G^n)`, summing over lower-left corners of the diagonal grid.
pub fn transform_iprime(mp: &MatchedPair, n: usize) -> SparseMatrix {
    let (off, cols) = d_offsets(mp, n);
    let rows = pow(mp.order(), n);
    let mut trip = Vec::with_capacity(rows * (n + 1));
    let mut xs = vec![0usize; n];
    for r in 0..rows {
        let mut t = r;
        for x in xs.iter_mut().rev() {
            *x = t % mp.order();
            t /= mp.order();
        }
        let grid = Grid::from_diagonal(mp, &xs);
        for i in 0..=n {
            let corner = grid.lower_left(n - i, i);
            trip.push((r, off[n - i] + corner.rank(mp) as usize, 1));
        }
    }
    SparseMatrix::from_triplets(rows, cols, trip)
}

/// `J: D^n → K^n`.
pub fn transform_j(mp: &MatchedPair, n: usize) -> SparseMatrix {
    let (off, cols) = d_offsets(mp, n);
    let n1 = pow(mp.g1().len(), n);
    let n2 = pow(mp.g2().len(), n);
    let mut trip: Vec<(usize, usize, i64)> = (0..n1).map(|k| (k, off[n] + k, 1)).collect();
    trip.extend((0..n2).map(|k| (n1 + k, off[0] + k, 1)));
    SparseMatrix::from_triplets(n1 + n2, cols, trip)
}

/// `T: C^n → E^n`. In degree 0 it is `a ↦ (a, 0)`; above, `T(F)(Z)` sums `F` over
/// the lower-left corners of `Z` with `n+1−i` rows and `i` columns, `1 ≤ i ≤ n`.
pub fn transform_t(mp: &MatchedPair, n: usize) -> SparseMatrix {
    if n == 0 {
        return SparseMatrix::from_triplets(2, 1, vec![(0, 0, 1)]);
    }
    let (off, cols) = c_offsets(mp, n);
    let rows = gamma_size(mp, n, n).unwrap() as usize;
    let mut trip = Vec::with_capacity(rows * n);
    for z in 0..rows {
        let grid = Grid::unrank_unchecked(mp, n, n, z as u64);
        for i in 1..=n {
            let p = n + 1 - i;
            let corner = grid.lower_left(p, i);
            trip.push((z, off[p] + corner.rank(mp) as usize, 1));
        }
    }
    SparseMatrix::from_triplets(rows, cols, trip)
}

/// Restriction of bar cochains of `G` to a subgroup factor.
pub fn restriction(mp: &MatchedPair, factor: Factor, n: usize) -> SparseMatrix {
    let elements = factor_elements(mp, factor);
    let rows = pow(elements.len(), n);
    let cols = pow(mp.order(), n);
    let mut trip = Vec::with_capacity(rows);
    let mut t = vec![0usize; n];
    for r in 0..rows {
        let mut k = r;
        for x in t.iter_mut().rev() {
            *x = elements[k % elements.len()];
            k /= elements.len();
        }
        trip.push((r, tuple_rank(mp, Factor::G, &t), 1));
    }
    SparseMatrix::from_triplets(rows, cols, trip)
}

/// `C^n → M^n = D^{n+1} ⊕ K^n`: `a ↦ (0, a, a)` in degree 0, inclusion above.
pub fn kac_to_cone(mp: &MatchedPair, n: usize) -> SparseMatrix {
    let (_, d_rank) = d_offsets(mp, n + 1);
    let k_rank = pow(mp.g1().len(), n) + pow(mp.g2().len(), n);
    if n == 0 {
        return SparseMatrix::from_triplets(d_rank + k_rank, 1, vec![(d_rank, 0, 1), (d_rank + 1, 0, 1)]);
    }
    let (doff, _) = d_offsets(mp, n + 1);
    let (coff, c_rank) = c_offsets(mp, n);
    let mut trip = Vec::with_capacity(c_rank);
    for p in 1..=n {
        let size = gamma_size(mp, p, n + 1 - p).unwrap() as usize;
        trip.extend((0..size).map(|k| (doff[p] + k, coff[p] + k, 1)));
    }
    SparseMatrix::from_triplets(d_rank + k_rank, c_rank, trip)
}

/// `K^n → M^n`, `G ↦ (0, (−1)^n G)`.
pub fn pair_to_cone(mp: &MatchedPair, n: usize) -> SparseMatrix {
    let (_, d_rank) = d_offsets(mp, n + 1);
    let k_rank = pow(mp.g1().len(), n) + pow(mp.g2().len(), n);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    SparseMatrix::from_triplets(d_rank + k_rank, k_rank, (0..k_rank).map(|k| (d_rank + k, k, sign)).collect())
}

/// `M^n → D^{n+1}`, projection onto the first summand.
pub fn cone_to_big(mp: &MatchedPair, n: i32) -> SparseMatrix {
    let (_, d_rank) = d_offsets(mp, (n + 1) as usize);
    let k_rank = if n >= 0 { pow(mp.g1().len(), n as usize) + pow(mp.g2().len(), n as usize) } else { 0 };
    SparseMatrix::from_triplets(d_rank, d_rank + k_rank, (0..d_rank).map(|k| (k, k, 1)).collect())
}

/// Collects per-degree matrices into a chain map over `degrees`.
pub fn chain_map<F>(shift: i32, degrees: impl IntoIterator<Item = i32>, mut f: F) -> ChainMap
where
    F: FnMut(i32) -> SparseMatrix,
{
    let mut m = ChainMap::new(shift);
    for n in degrees {
        m.maps.insert(n, f(n));
    }
    m
}

/// `I` as a chain map `bar_G → D` over degrees `0..=top` (degree 0 is the identity on constants).
pub fn chain_i(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| transform_i(mp, n as usize))
}

pub fn chain_iprime(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| transform_iprime(mp, n as usize))
}

pub fn chain_j(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| transform_j(mp, n as usize))
}

pub fn chain_t(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| transform_t(mp, n as usize))
}

pub fn chain_restriction(mp: &MatchedPair, factor: Factor, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| restriction(mp, factor, n as usize))
}

pub fn chain_kac_to_cone(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| kac_to_cone(mp, n as usize))
}

pub fn chain_pair_to_cone(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(0, 0..=top, |n| pair_to_cone(mp, n as usize))
}

pub fn chain_cone_to_big(mp: &MatchedPair, top: i32) -> ChainMap {
    chain_map(1, -1..=top, |n| cone_to_big(mp, n))
}
