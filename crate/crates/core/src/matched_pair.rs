//! Exact factorizations `G = G1·G2` and square completion.

use thiserror::Error;

use crate::group::{FiniteGroup, SubgroupSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchedPairError {
    #[error("element list {0} is not a subgroup")]
    NotASubgroup(&'static str),
    #[error("G1 and G2 intersect nontrivially (witness {0})")]
    IntersectionNotTrivial(usize),
    #[error("not an exact factorization: {0}")]
    NotExactFactorization(String),
}

/// A pair of subgroups with `G1 ∩ G2 = {e}` and `|G1|·|G2| = |G|`.
///
/// Every `x` factors uniquely as `x = p1(x)·p2(x)` and `x = q2(x)·q1(x)`
/// with `p1, q1 ∈ G1` and `p2, q2 ∈ G2`.
#[derive(Debug, Clone)]
pub struct MatchedPair {
    group: FiniteGroup,
    g1: SubgroupSpec,
    g2: SubgroupSpec,
    p1: Vec<u32>,
    p2: Vec<u32>,
    q1: Vec<u32>,
    q2: Vec<u32>,
    pos1: Vec<u32>,
    pos2: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl MatchedPair {
    pub fn new(group: FiniteGroup, g1: &[usize], g2: &[usize]) -> Result<Self, MatchedPairError> {
        let g1 = SubgroupSpec::new(&group, g1).ok_or(MatchedPairError::NotASubgroup("G1"))?;
        let g2 = SubgroupSpec::new(&group, g2).ok_or(MatchedPairError::NotASubgroup("G2"))?;
        Self::from_subgroups(group, g1, g2)
    }

    pub fn from_subgroups(group: FiniteGroup, g1: SubgroupSpec, g2: SubgroupSpec) -> Result<Self, MatchedPairError> {
        if let Some(&w) = g1.elements().iter().find(|&&x| x != group.identity() && g2.contains(x)) {
            return Err(MatchedPairError::IntersectionNotTrivial(w));
        }
        let n = group.order();
        if g1.len() * g2.len() != n {
            return Err(MatchedPairError::NotExactFactorization(format!(
                "|G1|·|G2| = {}·{} but |G| = {}",
                g1.len(),
                g2.len(),
                n
            )));
        }
        let (mut p1, mut p2, mut q1, mut q2) = (vec![NONE; n], vec![NONE; n], vec![NONE; n], vec![NONE; n]);
        for &g in g1.elements() {
            for &s in g2.elements() {
                let gs = group.mul(g, s);
                let sg = group.mul(s, g);
                if p1[gs] != NONE || q1[sg] != NONE {
                    return Err(MatchedPairError::NotExactFactorization(format!(
                        "duplicate product at element {}",
                        if p1[gs] != NONE { gs } else { sg }
                    )));
                }
                p1[gs] = g as u32;
                p2[gs] = s as u32;
                q2[sg] = s as u32;
                q1[sg] = g as u32;
            }
        }
        let mut pos1 = vec![NONE; n];
        let mut pos2 = vec![NONE; n];
        g1.elements().iter().enumerate().for_each(|(i, &x)| pos1[x] = i as u32);
        g2.elements().iter().enumerate().for_each(|(i, &x)| pos2[x] = i as u32);
        Ok(Self { group, g1, g2, p1, p2, q1, q2, pos1, pos2 })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn g1(&self) -> &SubgroupSpec {
        &self.g1
    }

    pub fn g2(&self) -> &SubgroupSpec {
        &self.g2
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn e(&self) -> usize {
        self.group.identity()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.group.mul(a, b)
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.group.inv(a)
    }

    #[inline]
    pub fn p1(&self, x: usize) -> usize {
        self.p1[x] as usize
    }

    #[inline]
    pub fn p2(&self, x: usize) -> usize {
        self.p2[x] as usize
    }

    #[inline]
    pub fn q1(&self, x: usize) -> usize {
        self.q1[x] as usize
    }

    #[inline]
    pub fn q2(&self, x: usize) -> usize {
        self.q2[x] as usize
    }

    /// `x = g·s` with `g ∈ G1`, `s ∈ G2`.
    pub fn p_factorize(&self, x: usize) -> (usize, usize) {
        (self.p1(x), self.p2(x))
    }

    /// `x = s·g` with `s ∈ G2`, `g ∈ G1`.
    pub fn q_factorize(&self, x: usize) -> (usize, usize) {
        (self.q2(x), self.q1(x))
    }

    /// Position of a `G1` element in the sorted list of `G1`.
    #[inline]
    pub fn pos1(&self, g: usize) -> usize {
        debug_assert!(self.pos1[g] != NONE);
        self.pos1[g] as usize
    }

    #[inline]
    pub fn pos2(&self, s: usize) -> usize {
        debug_assert!(self.pos2[s] != NONE);
        self.pos2[s] as usize
    }

    /// Completes the square with top edge `s ∈ G2` and left edge `h ∈ G1`,
    /// returning `(g, t)` (right, bottom) with `s·g = h·t`.
    #[inline]
    pub fn complete_square(&self, s: usize, h: usize) -> (usize, usize) {
        let x = self.mul(self.inv(h), s);
        (self.inv(self.q1(x)), self.q2(x))
    }

    /// Completes the square from its right edge `g` and bottom edge `t`,
    /// returning `(s, h)` (top, left).
    #[inline]
    pub fn complete_square_from_right_bottom(&self, g: usize, t: usize) -> (usize, usize) {
        let x = self.mul(g, self.inv(t));
        (self.inv(self.q2(x)), self.q1(x))
    }

    /// Completes the square from its top edge `s` and right edge `g`,
    /// returning `(h, t)` (left, bottom).
    #[inline]
    pub fn complete_square_from_top_right(&self, s: usize, g: usize) -> (usize, usize) {
        let x = self.mul(s, g);
        (self.p1(x), self.p2(x))
    }

    /// Checks the four edge-pair projections of `Γ_11` and the diagonal
    /// product map are bijections. Returns the first failing description.
    pub fn check_square_bijections(&self) -> Result<(), String> {
        let n1 = self.g1.len();
        let n2 = self.g2.len();
        let squares: Vec<[usize; 4]> = self
            .g2
            .elements()
            .iter()
            .flat_map(|&s| {
                self.g1.elements().iter().map(move |&h| {
                    let (g, t) = self.complete_square(s, h);
                    [s, g, h, t]
                })
            })
            .collect();
        for sq in &squares {
            let [s, g, h, t] = *sq;
            if self.mul(s, g) != self.mul(h, t) {
                return Err(format!("square ({s},{g},{h},{t}) does not commute"));
            }
        }
        // (vertical index, horizontal index) pairs: (g,s), (g,t), (h,s), (h,t)
        for (name, vi, hi) in [("(g,s)", 1, 0), ("(g,t)", 1, 3), ("(h,s)", 2, 0), ("(h,t)", 2, 3)] {
            let mut hit = vec![false; n1 * n2];
            for sq in &squares {
                let k = self.pos1(sq[vi]) * n2 + self.pos2(sq[hi]);
                if std::mem::replace(&mut hit[k], true) {
                    return Err(format!("projection {name} is not injective"));
                }
            }
        }
        let mut hit = vec![false; self.order()];
        for sq in &squares {
            if std::mem::replace(&mut hit[self.mul(sq[0], sq[1])], true) {
                return Err("diagonal product is not injective".into());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z6() -> MatchedPair {
        MatchedPair::new(FiniteGroup::cyclic(6), &[0, 2, 4], &[0, 3]).unwrap()
    }

    fn s3() -> (MatchedPair, usize, usize) {
        let g = FiniteGroup::from_permutations(3, &[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        let c = 1;
        let tau = 2;
        let g1 = g.subgroup_closure(&[c]).unwrap();
        let g2 = g.subgroup_closure(&[tau]).unwrap();
        (MatchedPair::from_subgroups(g, g1, g2).unwrap(), c, tau)
    }

    #[test]
    fn z6_factorizations() {
        let mp = z6();
        assert_eq!(mp.p_factorize(5), (2, 3));
        assert_eq!(mp.p_factorize(1), (4, 3));
        assert_eq!(mp.q_factorize(5), (3, 2));
        assert_eq!(mp.p_factorize(0), (0, 0));
        assert_eq!(mp.complete_square(3, 2), (2, 3));
        assert_eq!(mp.complete_square(0, 0), (0, 0));
    }

    #[test]
    fn bad_pairs() {
        let z6 = FiniteGroup::cyclic(6);
        assert_eq!(
            MatchedPair::new(z6, &[0, 2, 4], &[0, 2, 4]).unwrap_err(),
            MatchedPairError::IntersectionNotTrivial(2)
        );
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(
            MatchedPair::new(z4.clone(), &[0, 2], &[0, 2]).unwrap_err(),
            MatchedPairError::IntersectionNotTrivial(2)
        );
        assert!(matches!(
            MatchedPair::new(z4, &[0, 2], &[0]).unwrap_err(),
            MatchedPairError::NotExactFactorization(_)
        ));
    }

    #[test]
    fn s3_dihedral_relation() {
        let (mp, c, tau) = s3();
        let grp = mp.group();
        let c2 = grp.mul(c, c);
        assert_eq!(mp.q_factorize(grp.mul(c, tau)), (tau, c2));
        // brute-force solve τ·g = c·t
        let (g, t) = mp.complete_square(tau, c);
        let sols: Vec<(usize, usize)> = mp
            .g1()
            .elements()
            .iter()
            .flat_map(|&g| mp.g2().elements().iter().map(move |&t| (g, t)))
            .filter(|&(g, t)| grp.mul(tau, g) == grp.mul(c, t))
            .collect();
        assert_eq!(sols, vec![(g, t)]);
    }

    #[test]
    fn square_completions_agree() {
        let (mp, _, _) = s3();
        for &s in mp.g2().elements() {
            for &h in mp.g1().elements() {
                let (g, t) = mp.complete_square(s, h);
                assert_eq!(mp.complete_square_from_right_bottom(g, t), (s, h));
                assert_eq!(mp.complete_square_from_top_right(s, g), (h, t));
            }
        }
        assert!(mp.check_square_bijections().is_ok());
        for &s in mp.g2().elements() {
            assert_eq!(mp.complete_square(s, mp.e()), (mp.e(), s));
        }
    }
}
