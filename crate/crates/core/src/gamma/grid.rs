//! Elements of the grid spaces `Γ_pq`.
//!
//! A grid has `p` rows and `q` columns of commuting squares. Vertical edges
//! `g_{ij}` (1 ≤ i ≤ p, 0 ≤ j ≤ q) carry `G1` labels, horizontal edges
//! `s_{ij}` (0 ≤ i ≤ p, 1 ≤ j ≤ q) carry `G2` labels, and every square
//! satisfies `s_{i−1,j}·g_{ij} = g_{i,j−1}·s_{ij}`.

use thiserror::Error;

use crate::matched_pair::MatchedPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("rank {rank} out of range for a space of size {size}")]
    RankOutOfRange { rank: u64, size: u64 },
    #[error("face index {index} out of range 0..={max}")]
    FaceIndexOutOfRange { index: usize, max: usize },
    #[error("seed has the wrong length or labels outside the subgroups")]
    BadSeed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    p: usize,
    q: usize,
    vertical: Vec<u32>,
    horizontal: Vec<u32>,
}

/// `|G1|^p · |G2|^q`, or `None` on overflow.
pub fn gamma_size(mp: &MatchedPair, p: usize, q: usize) -> Option<u64> {
    let n1 = mp.g1().len() as u64;
    let n2 = mp.g2().len() as u64;
    n1.checked_pow(p as u32)?.checked_mul(n2.checked_pow(q as u32)?)
}

impl Grid {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Vertical edge `g_{ij}`, 1 ≤ i ≤ p, 0 ≤ j ≤ q.
    #[inline]
    pub fn g(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.p && j <= self.q);
        self.vertical[(i - 1) * (self.q + 1) + j] as usize
    }

    /// Horizontal edge `s_{ij}`, 0 ≤ i ≤ p, 1 ≤ j ≤ q.
    #[inline]
    pub fn s(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= self.p && j >= 1 && j <= self.q);
        self.horizontal[i * self.q + (j - 1)] as usize
    }

    fn set_g(&mut self, i: usize, j: usize, v: usize) {
        self.vertical[(i - 1) * (self.q + 1) + j] = v as u32;
    }

    fn set_s(&mut self, i: usize, j: usize, v: usize) {
        self.horizontal[i * self.q + (j - 1)] = v as u32;
    }

    fn blank(p: usize, q: usize) -> Self {
        Self { p, q, vertical: vec![0; p * (q + 1)], horizontal: vec![0; (p + 1) * q] }
    }

    /// The unique grid with the given left column (top to bottom) and top row (left to right).
    pub fn from_seed(mp: &MatchedPair, left: &[usize], top: &[usize]) -> Self {
        let (p, q) = (left.len(), top.len());
        let mut x = Self::blank(p, q);
        for (i, &g) in left.iter().enumerate() {
            x.set_g(i + 1, 0, g);
        }
        for (j, &s) in top.iter().enumerate() {
            x.set_s(0, j + 1, s);
        }
        for i in 1..=p {
            for j in 1..=q {
                let (g, t) = mp.complete_square(x.s(i - 1, j), x.g(i, j - 1));
                x.set_g(i, j, g);
                x.set_s(i, j, t);
            }
        }
        x
    }

    /// Like [`Grid::from_seed`] but checks subgroup membership of the seed.
    pub fn try_from_seed(mp: &MatchedPair, left: &[usize], top: &[usize]) -> Result<Self, GridError> {
        if left.iter().all(|&g| g < mp.order() && mp.g1().contains(g))
            && top.iter().all(|&s| s < mp.order() && mp.g2().contains(s))
        {
            Ok(Self::from_seed(mp, left, top))
        } else {
            Err(GridError::BadSeed)
        }
    }

    /// The unique grid with the given top row and right column (top to bottom).
    pub fn from_top_right(mp: &MatchedPair, top: &[usize], right: &[usize]) -> Self {
        let (p, q) = (right.len(), top.len());
        let mut x = Self::blank(p, q);
        for (j, &s) in top.iter().enumerate() {
            x.set_s(0, j + 1, s);
        }
        for (i, &g) in right.iter().enumerate() {
            x.set_g(i + 1, q, g);
        }
        for i in 1..=p {
            for j in (1..=q).rev() {
                let (h, t) = mp.complete_square_from_top_right(x.s(i - 1, j), x.g(i, j));
                x.set_g(i, j - 1, h);
                x.set_s(i, j, t);
            }
        }
        x
    }

    /// The grid in `Γ_nn` whose k-th diagonal square has diagonal product `xs[k]`.
    pub fn from_diagonal(mp: &MatchedPair, xs: &[usize]) -> Self {
        let n = xs.len();
        // vertex labels: v[i][j] is the product along any path from the top-left corner
        let mut diag = vec![mp.e(); n + 1];
        for k in 0..n {
            diag[k + 1] = mp.mul(diag[k], xs[k]);
        }
        let vertex = |i: usize, j: usize| -> usize {
            // unique element of diag[i]·G2 ∩ diag[j]·G1
            let a = diag[i];
            let b = diag[j];
            mp.mul(a, mp.q2(mp.mul(mp.inv(a), b)))
        };
        let mut v = vec![vec![0usize; n + 1]; n + 1];
        for (i, row) in v.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = vertex(i, j);
            }
        }
        Self::from_vertices(mp, &v)
    }

    /// Rebuilds edges from vertex labels, `s_{ij} = v_{i,j−1}⁻¹ v_{ij}` and `g_{ij} = v_{i−1,j}⁻¹ v_{ij}`.
    fn from_vertices(mp: &MatchedPair, v: &[Vec<usize>]) -> Self {
        let p = v.len() - 1;
        let q = v[0].len() - 1;
        let mut x = Self::blank(p, q);
        for i in 0..=p {
            for j in 0..=q {
                if j >= 1 {
                    x.set_s(i, j, mp.mul(mp.inv(v[i][j - 1]), v[i][j]));
                }
                if i >= 1 {
                    x.set_g(i, j, mp.mul(mp.inv(v[i - 1][j]), v[i][j]));
                }
            }
        }
        x
    }

    /// Vertex labels: products along monotone paths from the top-left corner.
    pub fn vertices(&self, mp: &MatchedPair) -> Vec<Vec<usize>> {
        let mut v = vec![vec![mp.e(); self.q + 1]; self.p + 1];
        for i in 0..=self.p {
            for j in 0..=self.q {
                v[i][j] = if i == 0 && j == 0 {
                    mp.e()
                } else if i == 0 {
                    mp.mul(v[0][j - 1], self.s(0, j))
                } else {
                    mp.mul(v[i - 1][j], self.g(i, j))
                };
            }
        }
        v
    }

    /// Checks that every edge lies in the right subgroup and every square commutes.
    pub fn is_valid(&self, mp: &MatchedPair) -> bool {
        let labels = self.vertical.iter().all(|&g| mp.g1().contains(g as usize))
            && self.horizontal.iter().all(|&s| mp.g2().contains(s as usize));
        labels
            && (1..=self.p).all(|i| {
                (1..=self.q).all(|j| mp.mul(self.s(i - 1, j), self.g(i, j)) == mp.mul(self.g(i, j - 1), self.s(i, j)))
            })
    }

    pub fn left_column(&self) -> Vec<usize> {
        (1..=self.p).map(|i| self.g(i, 0)).collect()
    }

    pub fn top_row(&self) -> Vec<usize> {
        (1..=self.q).map(|j| self.s(0, j)).collect()
    }

    pub fn right_column(&self) -> Vec<usize> {
        (1..=self.p).map(|i| self.g(i, self.q)).collect()
    }

    pub fn bottom_row(&self) -> Vec<usize> {
        (1..=self.q).map(|j| self.s(self.p, j)).collect()
    }

    /// Mixed-radix rank: left column digits (top first) are most significant,
    /// then the top row; digits are positions in the sorted subgroup lists.
    pub fn rank(&self, mp: &MatchedPair) -> u64 {
        seed_rank(mp, (1..=self.p).map(|i| self.g(i, 0)), (1..=self.q).map(|j| self.s(0, j)))
    }

    pub fn unrank(mp: &MatchedPair, p: usize, q: usize, k: u64) -> Result<Self, GridError> {
        let size = gamma_size(mp, p, q).unwrap_or(u64::MAX);
        if k >= size {
            return Err(GridError::RankOutOfRange { rank: k, size });
        }
        Ok(Self::unrank_unchecked(mp, p, q, k))
    }

    pub(crate) fn unrank_unchecked(mp: &MatchedPair, p: usize, q: usize, mut k: u64) -> Self {
        let n1 = mp.g1().len() as u64;
        let n2 = mp.g2().len() as u64;
        let mut top = vec![0usize; q];
        for j in (0..q).rev() {
            top[j] = mp.g2().elements()[(k % n2) as usize];
            k /= n2;
        }
        let mut left = vec![0usize; p];
        for i in (0..p).rev() {
            left[i] = mp.g1().elements()[(k % n1) as usize];
            k /= n1;
        }
        Self::from_seed(mp, &left, &top)
    }

    /// Horizontal face `∂h_i`, contracting vertex column `i` (0 ≤ i ≤ q).
    pub fn face_horizontal(&self, mp: &MatchedPair, i: usize) -> Result<Self, GridError> {
        if self.q == 0 || i > self.q {
            return Err(GridError::FaceIndexOutOfRange { index: i, max: self.q });
        }
        let q = self.q;
        let mut y = Self::blank(self.p, q - 1);
        for r in 0..=self.p {
            let mut out = 1;
            for j in 1..=q {
                let s = self.s(r, j);
                if (i == 0 && j == 1) || (i == q && j == q) || (i > 0 && i < q && j == i + 1) {
                    continue;
                }
                let v = if i > 0 && i < q && j == i { mp.mul(s, self.s(r, j + 1)) } else { s };
                y.set_s(r, out, v);
                out += 1;
            }
        }
        for r in 1..=self.p {
            let mut out = 0;
            for j in 0..=q {
                if j == i {
                    continue;
                }
                y.set_g(r, out, self.g(r, j));
                out += 1;
            }
        }
        Ok(y)
    }

    /// Vertical face `∂v_j`, contracting vertex row `j` (0 ≤ j ≤ p).
    pub fn face_vertical(&self, mp: &MatchedPair, j: usize) -> Result<Self, GridError> {
        if self.p == 0 || j > self.p {
            return Err(GridError::FaceIndexOutOfRange { index: j, max: self.p });
        }
        let p = self.p;
        let mut y = Self::blank(p - 1, self.q);
        for c in 0..=self.q {
            let mut out = 1;
            for i in 1..=p {
                let g = self.g(i, c);
                if (j == 0 && i == 1) || (j == p && i == p) || (j > 0 && j < p && i == j + 1) {
                    continue;
                }
                let v = if j > 0 && j < p && i == j { mp.mul(g, self.g(i + 1, c)) } else { g };
                y.set_g(out, c, v);
                out += 1;
            }
        }
        for c in 1..=self.q {
            let mut out = 0;
            for i in 0..=p {
                if i == j {
                    continue;
                }
                y.set_s(out, c, self.s(i, c));
                out += 1;
            }
        }
        Ok(y)
    }

    /// Rank of `∂h_i(self)` without materializing the face.
    pub fn face_horizontal_rank(&self, mp: &MatchedPair, i: usize) -> u64 {
        let q = self.q;
        let left_col = if i == 0 { 1 } else { 0 };
        let top = (1..=q).filter_map(|j| {
            if (i == 0 && j == 1) || (i == q && j == q) || (i > 0 && i < q && j == i + 1) {
                None
            } else if i > 0 && i < q && j == i {
                Some(mp.mul(self.s(0, j), self.s(0, j + 1)))
            } else {
                Some(self.s(0, j))
            }
        });
        seed_rank(mp, (1..=self.p).map(|r| self.g(r, left_col)), top)
    }

    /// Rank of `∂v_j(self)` without materializing the face.
    pub fn face_vertical_rank(&self, mp: &MatchedPair, j: usize) -> u64 {
        let p = self.p;
        let top_row = if j == 0 { 1 } else { 0 };
        let left = (1..=p).filter_map(|i| {
            if (j == 0 && i == 1) || (j == p && i == p) || (j > 0 && j < p && i == j + 1) {
                None
            } else if j > 0 && j < p && i == j {
                Some(mp.mul(self.g(i, 0), self.g(i + 1, 0)))
            } else {
                Some(self.g(i, 0))
            }
        });
        seed_rank(mp, left, (1..=self.q).map(|c| self.s(top_row, c)))
    }

    /// Sub-grid spanned by vertex rows `r0..=r1` and vertex columns `c0..=c1`.
    pub fn subgrid(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.p && c0 <= c1 && c1 <= self.q);
        let mut y = Self::blank(r1 - r0, c1 - c0);
        for i in r0..=r1 {
            for j in c0..=c1 {
                if j > c0 {
                    y.set_s(i - r0, j - c0, self.s(i, j));
                }
                if i > r0 {
                    y.set_g(i - r0, j - c0, self.g(i, j));
                }
            }
        }
        y
    }

    /// Lower-left corner with the last `rows` rows and the first `cols` columns of squares.
    pub fn lower_left(&self, rows: usize, cols: usize) -> Self {
        self.subgrid(self.p - rows, self.p, 0, cols)
    }

    /// Edge labels and sign of a monotone path from the top-left corner.
    ///
    /// `steps[k]` is `true` for a horizontal step. The sign is `(−1)^a` where
    /// `a` is the number of squares above the path.
    pub fn path(&self, steps: &[bool]) -> (Vec<usize>, bool) {
        let (mut i, mut j) = (0usize, 0usize);
        let mut above = 0usize;
        let mut word = Vec::with_capacity(steps.len());
        for &h in steps {
            if h {
                j += 1;
                word.push(self.s(i, j));
                above += i;
            } else {
                i += 1;
                word.push(self.g(i, j));
            }
        }
        debug_assert!(i == self.p && j == self.q);
        (word, above % 2 == 1)
    }
}

/// Rank of the grid with the given seed (see [`Grid::rank`]).
pub fn seed_rank<L, T>(mp: &MatchedPair, left: L, top: T) -> u64
where
    L: IntoIterator<Item = usize>,
    T: IntoIterator<Item = usize>,
{
    let n1 = mp.g1().len() as u64;
    let n2 = mp.g2().len() as u64;
    let mut k = 0u64;
    for g in left {
        k = k * n1 + mp.pos1(g) as u64;
    }
    for s in top {
        k = k * n2 + mp.pos2(s) as u64;
    }
    k
}

/// All monotone paths through a `p × q` grid, as step sequences.
pub fn monotone_paths(p: usize, q: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(p + q);
    fn rec(p: usize, q: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if p == 0 && q == 0 {
            out.push(cur.clone());
            return;
        }
        if q > 0 {
            cur.push(true);
            rec(p, q - 1, cur, out);
            cur.pop();
        }
        if p > 0 {
            cur.push(false);
            rec(p - 1, q, cur, out);
            cur.pop();
        }
    }
    rec(p, q, &mut cur, &mut out);
    out
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
    fn seeds_and_ranks() {
        let mp = z6();
        let x = Grid::from_seed(&mp, &[2], &[3]);
        assert_eq!((x.g(1, 1), x.s(1, 1)), (2, 3));
        assert_eq!(Grid::unrank(&mp, 0, 0, 0).unwrap().rank(&mp), 0);
        assert!(Grid::unrank(&mp, 1, 1, 6).is_err());
        let e = Grid::from_seed(&mp, &[0, 0], &[0, 0, 0]);
        assert!(e.vertical.iter().chain(&e.horizontal).all(|&x| x == 0));
        let mp = s3();
        for (p, q) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2)] {
            let size = gamma_size(&mp, p, q).unwrap();
            for k in 0..size {
                let x = Grid::unrank(&mp, p, q, k).unwrap();
                assert!(x.is_valid(&mp));
                assert_eq!(x.rank(&mp), k);
                assert_eq!(Grid::from_top_right(&mp, &x.top_row(), &x.right_column()), x);
            }
        }
    }

    #[test]
    fn diagonal_grids() {
        let mp = s3();
        for a in 0..6 {
            for b in 0..6 {
                let x = Grid::from_diagonal(&mp, &[a, b]);
                assert!(x.is_valid(&mp));
                let v = x.vertices(&mp);
                assert_eq!(v[1][1], a);
                assert_eq!(v[2][2], mp.mul(a, b));
                assert_eq!(x.s(0, 1), mp.q2(a));
                assert_eq!(x.g(1, 1), mp.q1(a));
                assert_eq!(x.g(1, 0), mp.p1(a));
                assert_eq!(x.s(1, 1), mp.p2(a));
            }
        }
    }

    #[test]
    fn single_square_faces() {
        let mp = z6();
        let x = Grid::from_seed(&mp, &[2], &[3]);
        assert_eq!(x.face_horizontal(&mp, 0).unwrap().g(1, 0), 2);
        let mp = s3();
        let x = Grid::from_seed(&mp, &[1], &[2]);
        assert_eq!(x.face_vertical(&mp, 0).unwrap().s(0, 1), x.s(1, 1));
        assert_eq!(x.face_horizontal(&mp, 1).unwrap().g(1, 0), x.g(1, 0));
        assert!(x.face_horizontal(&mp, 2).is_err());
    }

    #[test]
    fn gamma12_faces_match_picture() {
        let mp = s3();
        for k in 0..gamma_size(&mp, 1, 2).unwrap() {
            let x = Grid::unrank(&mp, 1, 2, k).unwrap();
            let (s, s2, t, t2) = (x.s(0, 1), x.s(0, 2), x.s(1, 1), x.s(1, 2));
            let (g, h, kk) = (x.g(1, 0), x.g(1, 1), x.g(1, 2));
            let f1 = x.face_horizontal(&mp, 1).unwrap();
            assert_eq!((f1.s(0, 1), f1.g(1, 1), f1.g(1, 0), f1.s(1, 1)), (mp.mul(s, s2), kk, g, mp.mul(t, t2)));
            let f0 = x.face_horizontal(&mp, 0).unwrap();
            assert_eq!((f0.s(0, 1), f0.g(1, 1), f0.g(1, 0), f0.s(1, 1)), (s2, kk, h, t2));
            let f2 = x.face_horizontal(&mp, 2).unwrap();
            assert_eq!((f2.s(0, 1), f2.g(1, 1), f2.g(1, 0), f2.s(1, 1)), (s, h, g, t));
        }
    }

    fn face_by_vertices(mp: &MatchedPair, x: &Grid, row: Option<usize>, col: Option<usize>) -> Grid {
        let v = x.vertices(mp);
        let kept: Vec<Vec<usize>> = v
            .iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != row)
            .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| Some(*j) != col).map(|(_, &a)| a).collect())
            .collect();
        let base = mp.inv(kept[0][0]);
        let kept: Vec<Vec<usize>> = kept.iter().map(|r| r.iter().map(|&a| mp.mul(base, a)).collect()).collect();
        Grid::from_vertices(mp, &kept)
    }

    #[test]
    fn faces_agree_with_vertex_deletion() {
        let mp = s3();
        for (p, q) in [(2, 2), (1, 3), (3, 1)] {
            for k in 0..gamma_size(&mp, p, q).unwrap() {
                let x = Grid::unrank(&mp, p, q, k).unwrap();
                for i in 0..=q {
                    let f = x.face_horizontal(&mp, i).unwrap();
                    assert!(f.is_valid(&mp));
                    assert_eq!(f, face_by_vertices(&mp, &x, None, Some(i)));
                    assert_eq!(f.rank(&mp), x.face_horizontal_rank(&mp, i));
                }
                for j in 0..=p {
                    let f = x.face_vertical(&mp, j).unwrap();
                    assert!(f.is_valid(&mp));
                    assert_eq!(f, face_by_vertices(&mp, &x, Some(j), None));
                    assert_eq!(f.rank(&mp), x.face_vertical_rank(&mp, j));
                }
            }
        }
    }

    #[test]
    fn simplicial_identities_on_gamma22() {
        let mp = s3();
        for k in 0..gamma_size(&mp, 2, 2).unwrap() {
            let x = Grid::unrank(&mp, 2, 2, k).unwrap();
            for j in 0..=2 {
                for i in 0..j {
                    let a = x.face_horizontal(&mp, j).unwrap().face_horizontal(&mp, i).unwrap();
                    let b = x.face_horizontal(&mp, i).unwrap().face_horizontal(&mp, j - 1).unwrap();
                    assert_eq!(a, b);
                    let a = x.face_vertical(&mp, j).unwrap().face_vertical(&mp, i).unwrap();
                    let b = x.face_vertical(&mp, i).unwrap().face_vertical(&mp, j - 1).unwrap();
                    assert_eq!(a, b);
                }
            }
            for i in 0..=2 {
                for j in 0..=2 {
                    let a = x.face_horizontal(&mp, i).unwrap().face_vertical(&mp, j).unwrap();
                    let b = x.face_vertical(&mp, j).unwrap().face_horizontal(&mp, i).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn paths_and_signs() {
        let mp = s3();
        let x = Grid::from_seed(&mp, &[1], &[2]);
        let paths = monotone_paths(1, 1);
        assert_eq!(paths.len(), 2);
        assert_eq!(x.path(&[true, false]), (vec![x.s(0, 1), x.g(1, 1)], false));
        assert_eq!(x.path(&[false, true]), (vec![x.g(1, 0), x.s(1, 1)], true));
        assert_eq!(monotone_paths(2, 3).len(), 10);
        // right, down, right, down, right in Γ_23 has 0 + 1 + 2 = 3 squares above
        let y = Grid::unrank(&mp, 2, 3, 17).unwrap();
        let (_, neg) = y.path(&[true, false, true, false, true]);
        assert!(neg);
        let (_, neg) = y.path(&[false, true, true, false, true]);
        assert!(!neg, "1 + 1 + 2 squares above");
    }
}
