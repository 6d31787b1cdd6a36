//! Independent check of cohomology groups by modular elimination.
//!
//! Over the local ring `ℤ/p^K`, eliminating pivots in order of increasing `p`-valuation
//! yields the `p`-parts of the invariant factors (those below `p^K`). Ranks over `ℚ` are
//! taken modulo the prime `2^61 − 1`. None of this shares code with the Smith pipeline.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use serde::Serialize;

use super::{differentials_at, AbelianGroupInfo, Coefficients, HomologyError};
use crate::gamma::CochainComplex;
use crate::sparse::SparseMatrix;

/// Prime modulus used for ranks over `ℚ`.
pub const RANK_PRIME: u64 = (1 << 61) - 1;

struct ModRing {
    p: u64,
    k: u32,
    n: u64,
}

impl ModRing {
    fn new(p: u64, k: u32) -> Self {
        Self { p, k, n: p.pow(k) }
    }

    /// Largest `K` with `p^K < 2^62`.
    fn widest(p: u64) -> Self {
        let mut k = 1;
        while (p as u128).pow(k + 1) < (1u128 << 62) {
            k += 1;
        }
        Self::new(p, k)
    }

    fn reduce(&self, x: i64) -> u64 {
        (x as i128).rem_euclid(self.n as i128) as u64
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.n as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.n - b)
        }
    }

    /// `p`-adic valuation of a nonzero residue.
    fn valuation(&self, mut a: u64) -> u32 {
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    fn inverse(&self, a: u64) -> u64 {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.n as i128, a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1, "not a unit");
        t.rem_euclid(self.n as i128) as u64
    }
}

/// Valuations of the Smith diagonal of `m` over `ℤ/p^K`; entries divisible by `p^K` are lost.
///
/// Works on whichever of `m`, `mᵀ` has fewer columns per row, and at each valuation level picks
/// pivots by a lazily updated Markowitz cost.
fn local_smith(m: &SparseMatrix, ring: &ModRing) -> Vec<u32> {
    let flip = m.rows() < m.cols();
    let (nr, nc) = if flip { (m.cols(), m.rows()) } else { (m.rows(), m.cols()) };
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); nr];
    for (r, c, v) in m.triplets() {
        let x = ring.reduce(v);
        if x != 0 {
            let (r, c) = if flip { (c, r) } else { (r, c) };
            rows[r].push((c as u32, x));
        }
    }
    rows.iter_mut().for_each(|r| r.sort_unstable_by_key(|e| e.0));
    let mut cols: Vec<Vec<u32>> = vec![Vec::new(); nc];
    for (r, row) in rows.iter().enumerate() {
        for &(c, _) in row {
            cols[c as usize].push(r as u32);
        }
    }
    let mut row_done = vec![false; nr];
    let mut col_done = vec![false; nc];
    let mut out = Vec::new();
    let lookup = |row: &Vec<(u32, u64)>, c: u32| row.binary_search_by_key(&c, |e| e.0).map_or(0, |k| row[k].1);
    for level in 0..ring.k {
        let pv = ring.p.pow(level);
        let mut waiting: Vec<usize> = (0..nc).filter(|&c| !col_done[c]).collect();
        loop {
            let mut heap: BinaryHeap<Reverse<(usize, usize)>> = waiting.drain(..).map(|c| Reverse((cols[c].len(), c))).collect();
            let mut progress = false;
            while let Some(Reverse((key, c))) = heap.pop() {
                if col_done[c] {
                    continue;
                }
                let mut sup = std::mem::take(&mut cols[c]);
                sup.sort_unstable();
                sup.dedup();
                sup.retain(|&r| !row_done[r as usize] && lookup(&rows[r as usize], c as u32) != 0);
                let pick = sup
                    .iter()
                    .copied()
                    .filter(|&r| ring.valuation(lookup(&rows[r as usize], c as u32)) == level)
                    .min_by_key(|&r| rows[r as usize].len());
                let Some(pr) = pick else {
                    cols[c] = sup;
                    waiting.push(c);
                    continue;
                };
                let pr = pr as usize;
                let cost = (rows[pr].len() - 1) * (sup.len() - 1);
                if cost > key {
                    // stale estimate: retry later with the true cost
                    cols[c] = sup;
                    heap.push(Reverse((cost, c)));
                    continue;
                }
                let a = lookup(&rows[pr], c as u32);
                let u_inv = ring.inverse(a / pv);
                let pivot_row = std::mem::take(&mut rows[pr]);
                for &r in &sup {
                    let r = r as usize;
                    if r == pr {
                        continue;
                    }
                    let b = lookup(&rows[r], c as u32);
                    let f = ring.mul(b / pv, u_inv);
                    let old = std::mem::take(&mut rows[r]);
                    let mut new = Vec::with_capacity(old.len() + pivot_row.len());
                    let (mut i, mut j) = (0, 0);
                    while i < old.len() || j < pivot_row.len() {
                        let (col, val) = match (old.get(i), pivot_row.get(j)) {
                            (Some(&(ca, va)), Some(&(cb, vb))) if ca == cb => {
                                i += 1;
                                j += 1;
                                (ca, ring.sub(va, ring.mul(f, vb)))
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
                                cols[cb as usize].push(r as u32);
                                (cb, ring.sub(0, ring.mul(f, vb)))
                            }
                            (None, None) => unreachable!(),
                        };
                        if val != 0 {
                            new.push((col, val));
                        }
                    }
                    rows[r] = new;
                }
                row_done[pr] = true;
                col_done[c] = true;
                out.push(level);
                progress = true;
            }
            if !progress || waiting.is_empty() {
                break;
            }
        }
    }
    out
}

/// Rank of `m` over `ℤ/q` for a prime `q < 2^62`.
pub fn rank_mod_prime(m: &SparseMatrix, q: u64) -> usize {
    local_smith(m, &ModRing::new(q, 1)).len()
}

/// Exponents `e` of the `p`-primary invariant factors `p^e` of `m` (those below `p^K`),
/// together with the number of pivots found.
pub fn primary_exponents(m: &SparseMatrix, p: u64) -> (Vec<u32>, usize) {
    let v = local_smith(m, &ModRing::widest(p));
    let count = v.len();
    (v.into_iter().filter(|&e| e > 0).collect(), count)
}

/// Group reconstructed by the oracle: free rank and `p`-primary exponents per checked prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleGroup {
    pub free_rank: usize,
    pub primary: BTreeMap<u64, Vec<u32>>,
    /// false when some invariant factor exceeded the local precision
    pub complete: bool,
}

impl OracleGroup {
    /// Invariant factors rebuilt from the primary parts.
    pub fn invariant_factors(&self) -> Vec<u64> {
        let len = self.primary.values().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![1u64; len];
        for (&p, exps) in &self.primary {
            let mut e = exps.clone();
            e.sort_unstable();
            // largest exponents go to the last factors
            for (k, &x) in e.iter().rev().enumerate() {
                out[len - 1 - k] *= p.pow(x);
            }
        }
        out
    }
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Cohomology at `C^n` from `prev = d_{n−1}` and `next = d_n`, checked at `primes`.
pub fn oracle_group(prev: &SparseMatrix, next: &SparseMatrix, coeff: Coefficients, primes: &[u64]) -> OracleGroup {
    let dim = prev.rows();
    let r_prev = rank_mod_prime(prev, RANK_PRIME);
    let r_next = rank_mod_prime(next, RANK_PRIME);
    let free = dim - r_prev - r_next;
    let mut complete = true;
    let mut primary = BTreeMap::new();
    let mut exps = |m: &SparseMatrix, rank: usize, p: u64| {
        let (e, count) = primary_exponents(m, p);
        complete &= count == rank;
        e
    };
    match coeff {
        Coefficients::Integers => {
            for &p in primes {
                primary.insert(p, exps(prev, r_prev, p));
            }
            OracleGroup { free_rank: free, primary, complete }
        }
        Coefficients::Torus => {
            for &p in primes {
                primary.insert(p, exps(next, r_next, p));
            }
            OracleGroup { free_rank: free, primary, complete }
        }
        Coefficients::Mod(m) => {
            // H^n ⊗ ℤ/m ⊕ Tor(H^{n+1}, ℤ/m)
            for p in prime_factors(m) {
                let mut vm = 0;
                let mut mm = m;
                while mm % p == 0 {
                    mm /= p;
                    vm += 1;
                }
                let mut e: Vec<u32> = exps(prev, r_prev, p).into_iter().chain(exps(next, r_next, p)).map(|x| x.min(vm)).collect();
                e.extend(std::iter::repeat(vm).take(free));
                e.sort_unstable();
                primary.insert(p, e);
            }
            OracleGroup { free_rank: 0, primary, complete }
        }
    }
}

/// Whether an engine result agrees with the oracle at the oracle's primes.
pub fn agrees(info: &AbelianGroupInfo, oracle: &OracleGroup, coeff: Coefficients) -> bool {
    if !oracle.complete {
        return false;
    }
    let free = match coeff {
        Coefficients::Torus => info.torus_rank,
        _ => info.free_rank,
    };
    if free != oracle.free_rank {
        return false;
    }
    let mut rest: Vec<u64> = info.torsion.clone();
    for (&p, exps) in &oracle.primary {
        let mut mine: Vec<u32> = Vec::new();
        for d in rest.iter_mut() {
            let mut e = 0;
            while *d % p == 0 {
                *d /= p;
                e += 1;
            }
            if e > 0 {
                mine.push(e);
            }
        }
        let mut theirs = exps.clone();
        mine.sort_unstable();
        theirs.sort_unstable();
        if mine != theirs {
            return false;
        }
    }
    // no torsion at primes the oracle did not look at
    rest.iter().all(|&d| d == 1)
}

/// Oracle reconstruction of `H^n(complex; coeff)` at the primes dividing `order_hint` or
/// any invariant factor of `info`, with the verdict of [`agrees`].
pub fn confirm(
    complex: &CochainComplex,
    n: i32,
    coeff: Coefficients,
    info: &AbelianGroupInfo,
    order_hint: u64,
) -> Result<(OracleGroup, bool), HomologyError> {
    let (prev, next) = differentials_at(complex, n)?;
    let mut primes = prime_factors(order_hint);
    for &d in &info.torsion {
        primes.extend(prime_factors(d));
    }
    primes.sort_unstable();
    primes.dedup();
    let oracle = oracle_group(&prev, &next, coeff, &primes);
    let ok = agrees(info, &oracle, coeff);
    Ok((oracle, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_valuations() {
        let m = SparseMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        // Smith diagonal 2, 6, 12
        let (e2, c2) = primary_exponents(&m, 2);
        let mut e2 = e2;
        e2.sort_unstable();
        assert_eq!((e2, c2), (vec![1, 1, 2], 3));
        let (e3, _) = primary_exponents(&m, 3);
        assert_eq!(e3.len(), 2);
        assert_eq!(rank_mod_prime(&m, RANK_PRIME), 3);
        assert_eq!(rank_mod_prime(&m, 2), 0);
    }

    #[test]
    fn rebuilt_factors() {
        let g = OracleGroup { free_rank: 0, primary: BTreeMap::from([(2, vec![1, 2]), (3, vec![1])]), complete: true };
        assert_eq!(g.invariant_factors(), vec![2, 12]);
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
    }
}
