//! Cochain complexes built from grid spaces and bar tuples.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::grid::{gamma_size, Grid};
use crate::matched_pair::MatchedPair;
use crate::sparse::SparseMatrix;

/// Default cap on the size of a single basis block.
pub const DEFAULT_BUDGET: u64 = 50_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("block {block} has {size} basis elements, over the budget of {budget}")]
    BudgetExceeded { block: String, size: u64, budget: u64 },
    #[error("max_degree must be at least 1")]
    BadDegree,
    #[error("d∘d ≠ 0 at degree {0}")]
    NotAComplex(i32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexKind {
    #[serde(rename = "bar_G")]
    BarG,
    #[serde(rename = "bar_G1")]
    BarG1,
    #[serde(rename = "bar_G2")]
    BarG2,
    #[serde(rename = "big_total_D")]
    BigTotalD,
    #[serde(rename = "kac_C")]
    KacC,
    #[serde(rename = "pentagonal_E")]
    PentagonalE,
    #[serde(rename = "mapping_cone_M")]
    MappingConeM,
    #[serde(rename = "pair_K")]
    PairK,
}

impl ComplexKind {
    pub const ALL: [ComplexKind; 8] = [
        ComplexKind::BarG,
        ComplexKind::BarG1,
        ComplexKind::BarG2,
        ComplexKind::BigTotalD,
        ComplexKind::KacC,
        ComplexKind::PentagonalE,
        ComplexKind::MappingConeM,
        ComplexKind::PairK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ComplexKind::BarG => "bar_G",
            ComplexKind::BarG1 => "bar_G1",
            ComplexKind::BarG2 => "bar_G2",
            ComplexKind::BigTotalD => "big_total_D",
            ComplexKind::KacC => "kac_C",
            ComplexKind::PentagonalE => "pentagonal_E",
            ComplexKind::MappingConeM => "mapping_cone_M",
            ComplexKind::PairK => "pair_K",
        }
    }
}

impl fmt::Display for ComplexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ComplexKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "bar_G" | "bar" => ComplexKind::BarG,
            "bar_G1" => ComplexKind::BarG1,
            "bar_G2" => ComplexKind::BarG2,
            "big_total_D" | "D" | "big" => ComplexKind::BigTotalD,
            "kac_C" | "kac" | "C" => ComplexKind::KacC,
            "pentagonal_E" | "pent" | "E" => ComplexKind::PentagonalE,
            "mapping_cone_M" | "cone" | "M" => ComplexKind::MappingConeM,
            "pair_K" | "K" => ComplexKind::PairK,
            _ => return Err(format!("unknown complex kind '{s}'")),
        })
    }
}

/// Which group a bar tuple ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    G,
    G1,
    G2,
}

/// One summand of a cochain group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Block {
    /// The coefficient module itself (rank 1).
    Module,
    /// Functions on `Γ_pq`, indexed by grid rank.
    Grid { p: usize, q: usize },
    /// Functions on `H^arity`, indexed by mixed-radix tuple rank.
    Tuple { factor: Factor, arity: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockEntry {
    pub block: Block,
    pub offset: usize,
    pub size: usize,
}

/// The basis of one cochain group as a list of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Basis {
    pub blocks: Vec<BlockEntry>,
}

impl Basis {
    fn push(&mut self, block: Block, size: usize) {
        let offset = self.rank();
        self.blocks.push(BlockEntry { block, offset, size });
    }

    fn extend(&mut self, other: &Basis) {
        for b in &other.blocks {
            self.push(b.block, b.size);
        }
    }

    pub fn rank(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.offset + b.size)
    }

    pub fn offset_of(&self, block: Block) -> Option<usize> {
        self.blocks.iter().find(|b| b.block == block).map(|b| b.offset)
    }
}

/// A bounded cochain complex of free ℤ-modules, degrees `n_min..=n_max`.
#[derive(Debug, Clone)]
pub struct CochainComplex {
    kind: ComplexKind,
    n_min: i32,
    bases: Vec<Basis>,
    diffs: Vec<SparseMatrix>,
}

impl CochainComplex {
    /// Assembles a complex from bases and differentials `d_n: C^n → C^{n+1}`, checking `d∘d = 0`.
    pub fn new(kind: ComplexKind, n_min: i32, bases: Vec<Basis>, diffs: Vec<SparseMatrix>) -> Result<Self, ComplexError> {
        assert_eq!(bases.len(), diffs.len() + 1, "need one differential between consecutive degrees");
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!(d.shape(), (bases[k + 1].rank(), bases[k].rank()), "differential {k} has the wrong shape");
        }
        let c = Self { kind, n_min, bases, diffs };
        for n in c.n_min..c.n_max() - 1 {
            if !c.differential(n + 1).unwrap().mul(c.differential(n).unwrap()).is_zero() {
                return Err(ComplexError::NotAComplex(n));
            }
        }
        Ok(c)
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn n_min(&self) -> i32 {
        self.n_min
    }

    pub fn n_max(&self) -> i32 {
        self.n_min + self.bases.len() as i32 - 1
    }

    /// Rank of `C^n`; zero outside the stored range.
    pub fn rank(&self, n: i32) -> usize {
        self.basis(n).map_or(0, Basis::rank)
    }

    pub fn basis(&self, n: i32) -> Option<&Basis> {
        if n < self.n_min {
            return None;
        }
        self.bases.get((n - self.n_min) as usize)
    }

    /// `d_n: C^n → C^{n+1}` if both degrees are stored.
    pub fn differential(&self, n: i32) -> Option<&SparseMatrix> {
        if n < self.n_min {
            return None;
        }
        self.diffs.get((n - self.n_min) as usize)
    }

    /// `d_n`, with the zero map below the stored range.
    pub fn differential_or_zero(&self, n: i32) -> Option<SparseMatrix> {
        if n < self.n_min {
            return Some(SparseMatrix::zero(self.rank(n + 1), 0));
        }
        self.differential(n).cloned()
    }

    /// Degrees `n` whose cohomology the stored data determines.
    pub fn cohomology_degrees(&self) -> std::ops::Range<i32> {
        self.n_min..self.n_max()
    }
}

/// Builds the complexes of a matched pair with a shared cache of block matrices.
pub struct ComplexBuilder<'a> {
    mp: &'a MatchedPair,
    budget: u64,
    cache: HashMap<(usize, usize, bool), SparseMatrix>,
    bar_cache: HashMap<(Factor, usize), SparseMatrix>,
}

impl<'a> ComplexBuilder<'a> {
    pub fn new(mp: &'a MatchedPair) -> Self {
        Self::with_budget(mp, DEFAULT_BUDGET)
    }

    pub fn with_budget(mp: &'a MatchedPair, budget: u64) -> Self {
        Self { mp, budget, cache: HashMap::new(), bar_cache: HashMap::new() }
    }

    pub fn matched_pair(&self) -> &MatchedPair {
        self.mp
    }

    fn check_grid(&self, p: usize, q: usize) -> Result<usize, ComplexError> {
        let size = gamma_size(self.mp, p, q).unwrap_or(u64::MAX);
        if size > self.budget {
            return Err(ComplexError::BudgetExceeded { block: format!("Γ_{p}{q}"), size, budget: self.budget });
        }
        Ok(size as usize)
    }

    fn factor_size(&self, factor: Factor) -> usize {
        match factor {
            Factor::G => self.mp.order(),
            Factor::G1 => self.mp.g1().len(),
            Factor::G2 => self.mp.g2().len(),
        }
    }

    fn check_tuple(&self, factor: Factor, arity: usize) -> Result<usize, ComplexError> {
        let size = (self.factor_size(factor) as u64).checked_pow(arity as u32).unwrap_or(u64::MAX);
        if size > self.budget {
            return Err(ComplexError::BudgetExceeded {
                block: format!("{factor:?}^{arity}"),
                size,
                budget: self.budget,
            });
        }
        Ok(size as usize)
    }

    /// `d^h: L(Γ_pq) → L(Γ_{p,q+1})` (or `d^v: L(Γ_pq) → L(Γ_{p+1,q})` when `vertical`).
    pub fn coboundary_matrix(&mut self, p: usize, q: usize, vertical: bool) -> Result<SparseMatrix, ComplexError> {
        if let Some(m) = self.cache.get(&(p, q, vertical)) {
            return Ok(m.clone());
        }
        let cols = self.check_grid(p, q)?;
        let (tp, tq) = if vertical { (p + 1, q) } else { (p, q + 1) };
        let rows = self.check_grid(tp, tq)?;
        let mp = self.mp;
        let nfaces = if vertical { tp + 1 } else { tq + 1 };
        let mut trip = Vec::with_capacity(rows * nfaces);
        for y in 0..rows {
            let grid = Grid::unrank_unchecked(mp, tp, tq, y as u64);
            for i in 0..nfaces {
                let x = if vertical { grid.face_vertical_rank(mp, i) } else { grid.face_horizontal_rank(mp, i) };
                trip.push((y, x as usize, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        let m = SparseMatrix::from_triplets(rows, cols, trip);
        self.cache.insert((p, q, vertical), m.clone());
        Ok(m)
    }

    /// Bar differential `L(H^n) → L(H^{n+1})` for trivial coefficients.
    pub fn bar_matrix(&mut self, factor: Factor, n: usize) -> Result<SparseMatrix, ComplexError> {
        if let Some(m) = self.bar_cache.get(&(factor, n)) {
            return Ok(m.clone());
        }
        let cols = self.check_tuple(factor, n)?;
        let rows = self.check_tuple(factor, n + 1)?;
        let elements = factor_elements(self.mp, factor);
        let mp = self.mp;
        let k = elements.len();
        let mut pos = vec![usize::MAX; mp.order()];
        elements.iter().enumerate().for_each(|(i, &x)| pos[x] = i);
        let mut trip = Vec::with_capacity(rows * (n + 2));
        let mut digits = vec![0usize; n + 1];
        for y in 0..rows {
            let mut r = y;
            for d in digits.iter_mut().rev() {
                *d = r % k;
                r /= k;
            }
            for i in 0..=n + 1 {
                let face: Vec<usize> = if i == 0 {
                    digits[1..].to_vec()
                } else if i == n + 1 {
                    digits[..n].to_vec()
                } else {
                    let merged = pos[mp.mul(elements[digits[i - 1]], elements[digits[i]])];
                    digits[..i - 1].iter().copied().chain([merged]).chain(digits[i + 1..].iter().copied()).collect()
                };
                let x = face.iter().fold(0usize, |acc, &d| acc * k + d);
                trip.push((y, x, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        let m = SparseMatrix::from_triplets(rows, cols, trip);
        self.bar_cache.insert((factor, n), m.clone());
        Ok(m)
    }

    /// Cochain complex of the given kind carrying degrees through `max_degree + 1`,
    /// so that cohomology is available in degrees up to `max_degree`.
    pub fn build(&mut self, kind: ComplexKind, max_degree: usize) -> Result<CochainComplex, ComplexError> {
        if max_degree < 1 {
            return Err(ComplexError::BadDegree);
        }
        let top = max_degree + 1;
        match kind {
            ComplexKind::BarG => self.bar_complex(kind, Factor::G, top),
            ComplexKind::BarG1 => self.bar_complex(kind, Factor::G1, top),
            ComplexKind::BarG2 => self.bar_complex(kind, Factor::G2, top),
            ComplexKind::PairK => {
                let (bases, diffs) = self.pair_k_parts(top)?;
                CochainComplex::new(kind, 0, bases, diffs)
            }
            ComplexKind::BigTotalD => {
                let (bases, diffs) = self.big_d_parts(top)?;
                CochainComplex::new(kind, 0, bases, diffs)
            }
            ComplexKind::KacC => self.kac_c(top),
            ComplexKind::PentagonalE => self.pentagonal_e(top),
            ComplexKind::MappingConeM => self.mapping_cone(top),
        }
    }

    fn bar_complex(&mut self, kind: ComplexKind, factor: Factor, top: usize) -> Result<CochainComplex, ComplexError> {
        let mut bases = Vec::new();
        let mut diffs = Vec::new();
        for n in 0..=top {
            let mut b = Basis::default();
            b.push(Block::Tuple { factor, arity: n }, self.check_tuple(factor, n)?);
            bases.push(b);
            if n < top {
                diffs.push(self.bar_matrix(factor, n)?);
            }
        }
        CochainComplex::new(kind, 0, bases, diffs)
    }

    fn pair_k_parts(&mut self, top: usize) -> Result<(Vec<Basis>, Vec<SparseMatrix>), ComplexError> {
        let mut bases = Vec::new();
        let mut diffs = Vec::new();
        for n in 0..=top {
            let mut b = Basis::default();
            b.push(Block::Tuple { factor: Factor::G1, arity: n }, self.check_tuple(Factor::G1, n)?);
            b.push(Block::Tuple { factor: Factor::G2, arity: n }, self.check_tuple(Factor::G2, n)?);
            if n < top {
                let d1 = self.bar_matrix(Factor::G1, n)?;
                let d2 = self.bar_matrix(Factor::G2, n)?;
                let rows = d1.rows() + d2.rows();
                let cols = d1.cols() + d2.cols();
                diffs.push(SparseMatrix::assemble(rows, cols, &[(0, 0, &d1), (d1.rows(), d1.cols(), &d2)]));
            }
            bases.push(b);
        }
        Ok((bases, diffs))
    }

    /// Total differential over blocks `(p,q)` with the sign `(−1)^q` on the vertical part.
    fn total_differential(&mut self, source: &Basis, target: &Basis) -> Result<SparseMatrix, ComplexError> {
        let mut parts = Vec::new();
        for b in &source.blocks {
            let Block::Grid { p, q } = b.block else { unreachable!("total complexes hold grid blocks") };
            if let Some(off) = target.offset_of(Block::Grid { p, q: q + 1 }) {
                parts.push((off, b.offset, self.coboundary_matrix(p, q, false)?));
            }
            if let Some(off) = target.offset_of(Block::Grid { p: p + 1, q }) {
                let dv = self.coboundary_matrix(p, q, true)?;
                parts.push((off, b.offset, if q % 2 == 1 { dv.scale(-1) } else { dv }));
            }
        }
        let refs: Vec<_> = parts.iter().map(|(r, c, m)| (*r, *c, m)).collect();
        Ok(SparseMatrix::assemble(target.rank(), source.rank(), &refs))
    }

    fn big_d_parts(&mut self, top: usize) -> Result<(Vec<Basis>, Vec<SparseMatrix>), ComplexError> {
        let mut bases = Vec::new();
        for n in 0..=top {
            let mut b = Basis::default();
            for p in 0..=n {
                b.push(Block::Grid { p, q: n - p }, self.check_grid(p, n - p)?);
            }
            bases.push(b);
        }
        let mut diffs = Vec::new();
        for n in 0..top {
            diffs.push(self.total_differential(&bases[n], &bases[n + 1])?);
        }
        Ok((bases, diffs))
    }

    fn kac_c(&mut self, top: usize) -> Result<CochainComplex, ComplexError> {
        let mut bases = Vec::new();
        let mut b0 = Basis::default();
        b0.push(Block::Module, 1);
        bases.push(b0);
        for n in 1..=top {
            let mut b = Basis::default();
            for p in 1..=n {
                b.push(Block::Grid { p, q: n + 1 - p }, self.check_grid(p, n + 1 - p)?);
            }
            bases.push(b);
        }
        let mut diffs = vec![SparseMatrix::zero(bases[1].rank(), 1)];
        for n in 1..top {
            diffs.push(self.total_differential(&bases[n], &bases[n + 1])?);
        }
        CochainComplex::new(ComplexKind::KacC, 0, bases, diffs)
    }

    /// `d_pent: L(Γ_nn) → L(Γ_{n+1,n+1})`.
    pub fn pentagonal_matrix(&mut self, n: usize) -> Result<SparseMatrix, ComplexError> {
        let cols = self.check_grid(n, n)?;
        let rows = self.check_grid(n + 1, n + 1)?;
        let mp = self.mp;
        let mut trip = Vec::with_capacity(rows * (n + 3));
        for y in 0..rows {
            let grid = Grid::unrank_unchecked(mp, n + 1, n + 1, y as u64);
            for i in 0..=n + 2 {
                let h = i.min(n + 1);
                let v = i.saturating_sub(1);
                let x = grid.face_horizontal(mp, h).unwrap().face_vertical_rank(mp, v);
                trip.push((y, x as usize, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        Ok(SparseMatrix::from_triplets(rows, cols, trip))
    }

    fn pentagonal_e(&mut self, top: usize) -> Result<CochainComplex, ComplexError> {
        let mut bases = Vec::new();
        let mut b0 = Basis::default();
        b0.push(Block::Module, 1);
        b0.push(Block::Module, 1);
        bases.push(b0);
        for n in 1..=top {
            let mut b = Basis::default();
            b.push(Block::Grid { p: n, q: n }, self.check_grid(n, n)?);
            bases.push(b);
        }
        let r1 = bases[1].rank();
        let mut diffs = vec![SparseMatrix::from_triplets(r1, 2, (0..r1).map(|y| (y, 1, 1)).collect())];
        for n in 1..top {
            diffs.push(self.pentagonal_matrix(n)?);
        }
        CochainComplex::new(ComplexKind::PentagonalE, 0, bases, diffs)
    }

    fn mapping_cone(&mut self, top: usize) -> Result<CochainComplex, ComplexError> {
        let (d_bases, d_diffs) = self.big_d_parts(top + 1)?;
        let (k_bases, k_diffs) = self.pair_k_parts(top)?;
        let mut bases = Vec::new();
        // degree −1 .. top
        for n in -1..=top as i32 {
            let mut b = Basis::default();
            b.extend(&d_bases[(n + 1) as usize]);
            if n >= 0 {
                b.extend(&k_bases[n as usize]);
            }
            bases.push(b);
        }
        let mut diffs = Vec::new();
        for n in -1..top as i32 {
            let dd = &d_diffs[(n + 1) as usize];
            let j = self.transform_j((n + 1) as usize)?;
            let (dr, dc) = dd.shape();
            let mut blocks = vec![(0, 0, dd), (dr, 0, &j)];
            let neg;
            if n >= 0 {
                neg = k_diffs[n as usize].scale(-1);
                blocks.push((dr, dc, &neg));
            }
            let rows = bases[(n + 2) as usize].rank();
            let cols = bases[(n + 1) as usize].rank();
            diffs.push(SparseMatrix::assemble(rows, cols, &blocks));
        }
        CochainComplex::new(ComplexKind::MappingConeM, -1, bases, diffs)
    }

    /// `J: D^n → K^n`, restriction to the `Γ_{n,0}` and `Γ_{0,n}` blocks.
    pub fn transform_j(&mut self, n: usize) -> Result<SparseMatrix, ComplexError> {
        let mut d_basis = Basis::default();
        for p in 0..=n {
            d_basis.push(Block::Grid { p, q: n - p }, self.check_grid(p, n - p)?);
        }
        let n1 = self.check_tuple(Factor::G1, n)?;
        let n2 = self.check_tuple(Factor::G2, n)?;
        let off_col = d_basis.offset_of(Block::Grid { p: n, q: 0 }).unwrap();
        let off_row = d_basis.offset_of(Block::Grid { p: 0, q: n }).unwrap();
        let mut trip: Vec<(usize, usize, i64)> = (0..n1).map(|k| (k, off_col + k, 1)).collect();
        trip.extend((0..n2).map(|k| (n1 + k, off_row + k, 1)));
        Ok(SparseMatrix::from_triplets(n1 + n2, d_basis.rank(), trip))
    }
}

/// Elements a bar tuple ranges over, in index order.
pub fn factor_elements(mp: &MatchedPair, factor: Factor) -> Vec<usize> {
    match factor {
        Factor::G => (0..mp.order()).collect(),
        Factor::G1 => mp.g1().elements().to_vec(),
        Factor::G2 => mp.g2().elements().to_vec(),
    }
}

/// Mixed-radix rank of a tuple of elements of `factor`, first entry most significant.
pub fn tuple_rank(mp: &MatchedPair, factor: Factor, tuple: &[usize]) -> usize {
    let (k, pos): (usize, Box<dyn Fn(usize) -> usize>) = match factor {
        Factor::G => (mp.order(), Box::new(|x| x)),
        Factor::G1 => (mp.g1().len(), Box::new(|x| mp.pos1(x))),
        Factor::G2 => (mp.g2().len(), Box::new(|x| mp.pos2(x))),
    };
    tuple.iter().fold(0, |acc, &x| acc * k + pos(x))
}

pub fn tuple_unrank(mp: &MatchedPair, factor: Factor, arity: usize, mut r: usize) -> Vec<usize> {
    let elements = factor_elements(mp, factor);
    let k = elements.len();
    let mut t = vec![0; arity];
    for x in t.iter_mut().rev() {
        *x = elements[r % k];
        r /= k;
    }
    t
}

/// Builds a single complex with the default budget.
pub fn build_complex(mp: &MatchedPair, kind: ComplexKind, max_degree: usize) -> Result<CochainComplex, ComplexError> {
    ComplexBuilder::new(mp).build(kind, max_degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn z6() -> MatchedPair {
        MatchedPair::new(FiniteGroup::cyclic(6), &[0, 2, 4], &[0, 3]).unwrap()
    }

    fn s3() -> MatchedPair {
        let g = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let g1 = g.subgroup_closure(&[1]).unwrap();
        let g2 = g.subgroup_closure(&[2]).unwrap();
        MatchedPair::from_subgroups(g, g1, g2).unwrap()
    }

    #[test]
    fn ranks() {
        let mp = z6();
        let bar = build_complex(&mp, ComplexKind::BarG, 2).unwrap();
        assert_eq!((0..4).map(|n| bar.rank(n)).collect::<Vec<_>>(), vec![1, 6, 36, 216]);
        let c = build_complex(&mp, ComplexKind::KacC, 2).unwrap();
        assert_eq!((0..4).map(|n| c.rank(n)).collect::<Vec<_>>(), vec![1, 6, 3 * 4 + 9 * 2, 3 * 8 + 9 * 4 + 27 * 2]);
        let m = build_complex(&mp, ComplexKind::MappingConeM, 2).unwrap();
        assert_eq!(m.n_min(), -1);
        assert_eq!(m.rank(-1), 1);
        assert_eq!(m.rank(0), 5 + 2);
    }

    #[test]
    fn coboundary_examples() {
        let mp = z6();
        let mut b = ComplexBuilder::new(&mp);
        assert!(b.coboundary_matrix(1, 0, false).unwrap().is_zero());
        let mp = s3();
        let mut b = ComplexBuilder::new(&mp);
        for (p, q) in [(0, 0), (1, 0), (1, 1), (2, 1), (1, 2)] {
            let dh = b.coboundary_matrix(p, q, false).unwrap();
            // q + 2 faces with alternating signs
            let want = (q as i64 + 2) % 2;
            for r in 0..dh.rows() {
                assert_eq!(dh.row(r).map(|(_, v)| v).sum::<i64>(), want);
            }
            assert!(b.coboundary_matrix(p, q + 1, false).unwrap().mul(&dh).is_zero());
            let dv = b.coboundary_matrix(p, q, true).unwrap();
            assert!(b.coboundary_matrix(p + 1, q, true).unwrap().mul(&dv).is_zero());
            // d^v d^h = d^h d^v
            let a = b.coboundary_matrix(p, q + 1, true).unwrap().mul(&dh);
            let c = b.coboundary_matrix(p + 1, q, false).unwrap().mul(&dv);
            assert!(a.sub(&c).is_zero());
        }
    }

    #[test]
    fn grid_columns_match_bar() {
        let mp = s3();
        let mut b = ComplexBuilder::new(&mp);
        for n in 0..3 {
            assert_eq!(b.coboundary_matrix(n, 0, true).unwrap(), b.bar_matrix(Factor::G1, n).unwrap());
            assert_eq!(b.coboundary_matrix(0, n, false).unwrap(), b.bar_matrix(Factor::G2, n).unwrap());
        }
    }

    #[test]
    fn every_kind_is_a_complex() {
        for mp in [z6(), s3()] {
            for kind in ComplexKind::ALL {
                let c = build_complex(&mp, kind, 3).unwrap();
                assert!(c.n_max() >= 4);
            }
        }
    }

    #[test]
    fn budget() {
        let mp = s3();
        let err = ComplexBuilder::with_budget(&mp, 100).build(ComplexKind::BarG, 3).unwrap_err();
        assert!(matches!(err, ComplexError::BudgetExceeded { size: 216, .. }));
    }

    #[test]
    fn tuples_round_trip() {
        let mp = s3();
        for r in 0..27 {
            let t = tuple_unrank(&mp, Factor::G1, 3, r);
            assert_eq!(tuple_rank(&mp, Factor::G1, &t), r);
        }
    }
}
