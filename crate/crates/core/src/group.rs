//! Finite groups given by Cayley tables.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

/// Default cap on the order of a group generated by permutations.
pub const DEFAULT_ORDER_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row},{col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("row or column {index} is not a bijection")]
    NotBijectiveRow { index: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("not associative at ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("group order exceeds the limit {limit}")]
    OrderLimitExceeded { limit: usize },
    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },
}

/// A finite group on the index set `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
}

impl FiniteGroup {
    /// Validates a Cayley table. `table[a][b]` is the index of `a·b`.
    pub fn from_table(table: &[Vec<usize>]) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        let mut flat = Vec::with_capacity(n * n);
        for (row, entries) in table.iter().enumerate() {
            if entries.len() != n {
                return Err(GroupError::NotSquare { row, len: entries.len(), expected: n });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::EntryOutOfRange { row, col, value });
                }
                flat.push(value as u32);
            }
        }
        Self::from_flat(n, flat)
    }

    fn from_flat(n: usize, flat: Vec<u32>) -> Result<Self, GroupError> {
        let mut seen = vec![usize::MAX; n];
        for a in 0..n {
            for b in 0..n {
                let v = flat[a * n + b] as usize;
                if seen[v] == a {
                    return Err(GroupError::NotBijectiveRow { index: a });
                }
                seen[v] = a;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for b in 0..n {
            for a in 0..n {
                let v = flat[a * n + b] as usize;
                if seen[v] == b {
                    return Err(GroupError::NotBijectiveRow { index: b });
                }
                seen[v] = b;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| flat[e * n + a] as usize == a && flat[a * n + e] as usize == a))
            .ok_or(GroupError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                let ab = flat[a * n + b] as usize;
                for c in 0..n {
                    let bc = flat[b * n + c] as usize;
                    if flat[ab * n + c] != flat[a * n + bc] {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            // rows are bijective, so a right inverse exists and is two-sided in a group
            let inv = (0..n).find(|&b| flat[a * n + b] as usize == identity).unwrap();
            inverse[a] = inv as u32;
        }
        Ok(Self { order: n, table: flat, identity, inverse })
    }

    /// Closure of permutation generators under composition.
    ///
    /// Element 0 is the identity permutation and the remaining elements are
    /// numbered in breadth-first order of discovery, multiplying by the
    /// generators in the given order. The product `a·b` is "apply `b`, then `a`".
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_permutations_with_limit(degree, generators, DEFAULT_ORDER_LIMIT)
    }

    pub fn from_permutations_with_limit(
        degree: usize,
        generators: &[Vec<usize>],
        limit: usize,
    ) -> Result<Self, GroupError> {
        Ok(Self::permutation_closure(degree, generators, limit)?.0)
    }

    /// Like [`FiniteGroup::from_permutations`], also returning the permutation for each element.
    pub fn permutation_closure(
        degree: usize,
        generators: &[Vec<usize>],
        limit: usize,
    ) -> Result<(Self, Vec<Vec<usize>>), GroupError> {
        for (index, g) in generators.iter().enumerate() {
            let mut hit = vec![false; degree];
            let ok = g.len() == degree
                && g.iter().all(|&x| x < degree && !std::mem::replace(&mut hit[x], true));
            if !ok {
                return Err(GroupError::NotAPermutation { index, degree });
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&x| a[x]).collect() };
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = compose(&elements[i], g);
                if !index.contains_key(&next) {
                    if elements.len() >= limit {
                        return Err(GroupError::OrderLimitExceeded { limit });
                    }
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let n = elements.len();
        let mut flat = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                flat.push(index[&compose(a, b)] as u32);
            }
        }
        Ok((Self::from_flat(n, flat)?, elements))
    }

    /// Cyclic group of order `n` with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(&table).expect("cyclic table is a group")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// Product of a word, left to right.
    pub fn product<I: IntoIterator<Item = usize>>(&self, word: I) -> usize {
        word.into_iter().fold(self.identity, |acc, x| self.mul(acc, x))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn inverse_table(&self) -> Vec<usize> {
        self.inverse.iter().map(|&x| x as usize).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Result<SubgroupSpec, GroupError> {
        if let Some(&index) = seed.iter().find(|&&x| x >= self.order) {
            return Err(GroupError::IndexOutOfRange { index, order: self.order });
        }
        let mut member = vec![false; self.order];
        member[self.identity] = true;
        let mut elements = vec![self.identity];
        let mut frontier: Vec<usize> = Vec::new();
        for &s in seed {
            if !member[s] {
                member[s] = true;
                elements.push(s);
                frontier.push(s);
            }
        }
        // in a finite group, closure under products alone already gives inverses
        while let Some(x) = frontier.pop() {
            let current = elements.clone();
            for y in current {
                for z in [self.mul(x, y), self.mul(y, x)] {
                    if !member[z] {
                        member[z] = true;
                        elements.push(z);
                        frontier.push(z);
                    }
                }
            }
        }
        elements.sort_unstable();
        Ok(SubgroupSpec { elements })
    }

    /// Checks that `elements` is closed under products and inverses and contains the identity.
    pub fn is_subgroup(&self, elements: &[usize]) -> bool {
        if elements.iter().any(|&x| x >= self.order) {
            return false;
        }
        let mut member = vec![false; self.order];
        elements.iter().for_each(|&x| member[x] = true);
        member[self.identity]
            && elements.iter().all(|&a| member[self.inv(a)] && elements.iter().all(|&b| member[self.mul(a, b)]))
    }
}

/// A subgroup, stored as the sorted list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgroupSpec {
    elements: Vec<usize>,
}

impl SubgroupSpec {
    /// Wraps a list of elements after checking it is a subgroup of `group`.
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Option<Self> {
        let mut elements = elements.to_vec();
        elements.sort_unstable();
        elements.dedup();
        group.is_subgroup(&elements).then_some(Self { elements })
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Position of `x` in the sorted element list.
    pub fn position(&self, x: usize) -> Option<usize> {
        self.elements.binary_search(&x).ok()
    }
}
