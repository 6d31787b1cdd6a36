//! Cohomology of integer cochain complexes with `ℤ`, `ℤ/m` and `𝕋 = ℝ/ℤ` coefficients.
//!
//! `ℤ`: `ker d_n / im d_{n−1}` directly.
//! `ℤ/m`: the complex is first shrunk by unit-pivot elimination over `ℤ`; the reduced next
//! differential `B'` is replaced by its row Hermite form `H` (same kernel modulo `m`), and the
//! group is read from the cone of multiplication by `m` with cochains `ℤ^r ⊕ C'^n`, where
//! `(a, b)` is a cocycle iff `m·a + H b = 0` and the class of `(a, b)` is `b mod m`.
//! `𝕋`: as the character group of `H_n` of the transposed complex. A class is read off by
//! evaluating a `𝕋`-cocycle on the homology generators; representatives are `Σ v_i P_i mod 1`
//! where `P` is the class-reading functional of that homology group.

pub mod oracle;
pub mod reduce;
pub mod snf;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{ChainMap, CochainComplex};
use crate::sparse::SparseMatrix;
pub use reduce::{dense_subquotient, reduce_pair, subquotient, ReduceError, Reduction, Subquotient};
pub use snf::{lattice_contains, lattice_hnf, smith_normal_form, IntMatrix, Smith, Track};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("degree {0} is not available in this complex")]
    DegreeUnavailable(i32),
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("not a chain map at degree {degree}: max |violation| {max_violation}")]
    NotAChainMap { degree: i32, max_violation: i64 },
    #[error("chain map is missing degree {0}")]
    MissingDegree(i32),
    #[error("invariant factor {0} does not fit in 64 bits")]
    TorsionTooLarge(BigInt),
    #[error("coefficient mismatch: {0} vs {1}")]
    CoefficientMismatch(Coefficients, Coefficients),
    #[error("modulus must be at least 2")]
    BadModulus,
    #[error("cochain has length {got}, expected {expected}")]
    LengthMismatch { got: usize, expected: usize },
    #[error("not a cocycle")]
    NotACocycle,
}

/// Trivial coefficient module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Coefficients {
    Integers,
    Mod(u64),
    Torus,
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => write!(f, "Z"),
            Coefficients::Mod(m) => write!(f, "Zm:{m}"),
            Coefficients::Torus => write!(f, "T"),
        }
    }
}

impl FromStr for Coefficients {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "Z" | "z" => Ok(Coefficients::Integers),
            "T" | "t" => Ok(Coefficients::Torus),
            _ => {
                let m = s
                    .strip_prefix("Zm:")
                    .or_else(|| s.strip_prefix("Z/"))
                    .and_then(|m| m.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown coefficients {s:?} (expected Z, Zm:<m> or T)"))?;
                if m < 2 {
                    return Err("modulus must be at least 2".into());
                }
                Ok(Coefficients::Mod(m))
            }
        }
    }
}

impl TryFrom<String> for Coefficients {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Coefficients> for String {
    fn from(c: Coefficients) -> String {
        c.to_string()
    }
}

/// `ℤ^free ⊕ 𝕋^torus ⊕ ⊕ ℤ/d_i` with `d_1 | d_2 | …`, all `d_i ≥ 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroupInfo {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
    pub torus_rank: usize,
}

impl AbelianGroupInfo {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn finite(torsion: Vec<u64>) -> Self {
        Self { free_rank: 0, torsion, torus_rank: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torus_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the group when finite.
    pub fn order(&self) -> Option<u64> {
        if self.free_rank > 0 || self.torus_rank > 0 {
            return None;
        }
        self.torsion.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    /// Canonical form from arbitrary cyclic orders (entries ≤ 1 are dropped).
    pub fn from_cyclic_orders(free_rank: usize, torus_rank: usize, orders: &[u64]) -> Self {
        // primary decomposition, then recombine into a divisibility chain
        let mut primary: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
        for &d in orders.iter().filter(|&&d| d > 1) {
            for p in oracle::prime_factors(d) {
                let mut e = 0;
                let mut x = d;
                while x % p == 0 {
                    x /= p;
                    e += 1;
                }
                primary.entry(p).or_default().push(e);
            }
        }
        let g = oracle::OracleGroup { free_rank, primary, complete: true };
        Self { free_rank, torsion: g.invariant_factors(), torus_rank }
    }

    fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|&d| d >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

impl fmt::Display for AbelianGroupInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        match self.torus_rank {
            0 => {}
            1 => parts.push("T".into()),
            r => parts.push(format!("T^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// A cochain with values in a coefficient module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cochain {
    Integer(Vec<BigInt>),
    Residue { modulus: u64, values: Vec<u64> },
    /// rationals in `[0, 1)`
    Torus(Vec<BigRational>),
}

impl Cochain {
    pub fn len(&self) -> usize {
        match self {
            Cochain::Integer(v) => v.len(),
            Cochain::Residue { values, .. } => values.len(),
            Cochain::Torus(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coefficients(&self) -> Coefficients {
        match self {
            Cochain::Integer(_) => Coefficients::Integers,
            Cochain::Residue { modulus, .. } => Coefficients::Mod(*modulus),
            Cochain::Torus(_) => Coefficients::Torus,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Cochain::Integer(v) => v.iter().all(Zero::is_zero),
            Cochain::Residue { values, .. } => values.iter().all(|&x| x == 0),
            Cochain::Torus(v) => v.iter().all(Zero::is_zero),
        }
    }

    /// `d·c` in the coefficient module.
    pub fn apply(&self, d: &SparseMatrix) -> Cochain {
        match self {
            Cochain::Integer(v) => Cochain::Integer(apply_big(d, v)),
            Cochain::Residue { modulus, values } => {
                let m = *modulus as i128;
                let out = d.apply(values, &0u64, |acc, a, x| {
                    *acc = ((*acc as i128 + a as i128 * *x as i128).rem_euclid(m)) as u64;
                });
                Cochain::Residue { modulus: *modulus, values: out }
            }
            Cochain::Torus(v) => Cochain::Torus(apply_rational(d, v).into_iter().map(|x| frac(&x)).collect()),
        }
    }
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn apply_big(d: &SparseMatrix, v: &[BigInt]) -> Vec<BigInt> {
    d.apply(v, &BigInt::zero(), |acc, a, x| {
        if !x.is_zero() {
            *acc += x * BigInt::from(a);
        }
    })
}

pub fn apply_rational(d: &SparseMatrix, v: &[BigRational]) -> Vec<BigRational> {
    d.apply(v, &BigRational::zero(), |acc, a, x| {
        if !x.is_zero() {
            *acc += x * BigRational::from_integer(BigInt::from(a));
        }
    })
}

fn to_u64(d: &BigInt) -> Result<u64, HomologyError> {
    d.to_u64().ok_or_else(|| HomologyError::TorsionTooLarge(d.clone()))
}

/// `H^n(C; coeff)` with generators and a class-reading functional.
#[derive(Debug, Clone)]
pub struct CohomologyGroup {
    pub degree: i32,
    pub coeff: Coefficients,
    pub info: AbelianGroupInfo,
    sq: Subquotient,
    /// rank of `C^n`
    cochain_rank: usize,
    /// `d_n`, used to test cocycles
    next: SparseMatrix,
    /// reduced model and compressed next differential for `ℤ/m`
    residue: Option<Box<(Reduction, IntMatrix)>>,
}

/// The two differentials around `C^n`: `d_{n−1}` (zero below the complex) and `d_n`.
pub fn differentials_at(c: &CochainComplex, n: i32) -> Result<(SparseMatrix, SparseMatrix), HomologyError> {
    if n < c.n_min() || n >= c.n_max() {
        return Err(HomologyError::DegreeUnavailable(n));
    }
    let prev = c.differential_or_zero(n - 1).ok_or(HomologyError::DegreeUnavailable(n))?;
    let next = c.differential(n).ok_or(HomologyError::DegreeUnavailable(n))?.clone();
    Ok((prev, next))
}

/// Cohomology of `complex` in degree `n`.
pub fn cohomology(complex: &CochainComplex, n: i32, coeff: Coefficients) -> Result<CohomologyGroup, HomologyError> {
    let (prev, next) = differentials_at(complex, n)?;
    cohomology_from(&prev, &next, n, coeff)
}

/// Cohomology at the middle of `prev: C^{n−1} → C^n` and `next: C^n → C^{n+1}`.
pub fn cohomology_from(prev: &SparseMatrix, next: &SparseMatrix, n: i32, coeff: Coefficients) -> Result<CohomologyGroup, HomologyError> {
    let rank = prev.rows();
    let mut residue = None;
    let sq = match coeff {
        Coefficients::Integers => subquotient(prev, next)?,
        Coefficients::Torus => subquotient(&next.transpose(), &prev.transpose())?,
        Coefficients::Mod(m) => {
            if m < 2 {
                return Err(HomologyError::BadModulus);
            }
            let red = reduce_pair(prev, next)?;
            let dim = red.reduced_dim();
            let h = IntMatrix::from_rows_with_cols(&lattice_hnf(&red.b.to_rows(), dim), dim);
            let r = h.rows();
            let below = red.a.cols();
            let mb = BigInt::from(m);
            // A_Q = [[−H, 0], [m·I, A']] : ℤ^{dim} ⊕ X' → ℤ^r ⊕ Y'
            let mut a = IntMatrix::zeros(r + dim, dim + below);
            // B_Q = [m·I, H] : ℤ^r ⊕ Y' → ℤ^r
            let mut b = IntMatrix::zeros(r, r + dim);
            for i in 0..r {
                b[(i, i)] = mb.clone();
                for j in 0..dim {
                    a[(i, j)] = -&h[(i, j)];
                    b[(i, r + j)] = h[(i, j)].clone();
                }
            }
            for i in 0..dim {
                a[(r + i, i)] = mb.clone();
                for j in 0..below {
                    a[(r + i, dim + j)] = red.a[(i, j)].clone();
                }
            }
            residue = Some(Box::new((red, h)));
            dense_subquotient(&a, &b)
        }
    };
    let torsion = sq.torsion.iter().map(to_u64).collect::<Result<Vec<_>, _>>()?;
    let info = match coeff {
        Coefficients::Torus => AbelianGroupInfo { free_rank: 0, torsion, torus_rank: sq.free_rank },
        _ => AbelianGroupInfo { free_rank: sq.free_rank, torsion, torus_rank: 0 },
    };
    debug_assert!(info.is_canonical());
    Ok(CohomologyGroup { degree: n, coeff, info, sq, cochain_rank: rank, next: next.clone(), residue })
}

impl CohomologyGroup {
    pub fn num_coords(&self) -> usize {
        self.sq.num_coords()
    }

    pub fn cochain_rank(&self) -> usize {
        self.cochain_rank
    }

    /// Order of coordinate `i` (`None` for `ℤ` or `𝕋` summands).
    pub fn coord_order(&self, i: usize) -> Option<&BigInt> {
        self.sq.order(i)
    }

    /// The underlying subquotient (for `𝕋`, the homology of the transposed complex).
    pub fn subquotient(&self) -> &Subquotient {
        &self.sq
    }

    pub fn is_cocycle(&self, c: &Cochain) -> bool {
        c.len() == self.cochain_rank && c.coefficients() == self.coeff && c.apply(&self.next).is_zero()
    }

    /// Representative cocycle of each coordinate generator. For `𝕋`, the torsion generators
    /// `P_i / d_i`; the torus directions are given by [`Self::torus_directions`].
    pub fn generators(&self) -> Vec<Cochain> {
        match self.coeff {
            Coefficients::Integers => self.sq.generators.iter().map(|g| Cochain::Integer(g.clone())).collect(),
            Coefficients::Mod(m) => self.sq.generators.iter().map(|g| self.residue_of(g, m)).collect(),
            Coefficients::Torus => (0..self.sq.torsion.len())
                .map(|i| {
                    let mut v = vec![BigRational::zero(); self.num_coords()];
                    v[i] = BigRational::new(BigInt::one(), self.sq.torsion[i].clone());
                    Cochain::Torus(self.torus_representative(&v))
                })
                .collect(),
        }
    }

    /// Integer cochains `P_j` spanning the identity component (`𝕋` only).
    pub fn torus_directions(&self) -> Vec<Vec<BigInt>> {
        match self.coeff {
            Coefficients::Torus => self.sq.classifier[self.sq.torsion.len()..].to_vec(),
            _ => Vec::new(),
        }
    }

    /// The residue cochain of a cone element `(a, b')`.
    fn residue_of(&self, y: &[BigInt], m: u64) -> Cochain {
        let (red, h) = self.residue.as_deref().expect("residue model");
        let b = red.include(&y[h.rows()..]);
        let mb = BigInt::from(m);
        let values = b.iter().map(|x| x.mod_floor(&mb).to_u64().unwrap()).collect();
        Cochain::Residue { modulus: m, values }
    }

    /// Coordinates of the class of a cocycle. For `𝕋`, coordinates are the values of the
    /// character on the homology generators, in `[0, 1)`, returned as rationals; for `ℤ`
    /// and `ℤ/m`, integer coordinates reduced modulo the coordinate orders.
    pub fn classify(&self, c: &Cochain) -> Result<Vec<BigRational>, HomologyError> {
        if c.len() != self.cochain_rank {
            return Err(HomologyError::LengthMismatch { got: c.len(), expected: self.cochain_rank });
        }
        if c.coefficients() != self.coeff {
            return Err(HomologyError::CoefficientMismatch(c.coefficients(), self.coeff));
        }
        if !self.is_cocycle(c) {
            return Err(HomologyError::NotACocycle);
        }
        let ints = |v: Vec<BigInt>| v.into_iter().map(BigRational::from_integer).collect();
        Ok(match c {
            Cochain::Integer(v) => ints(self.sq.classify(v)),
            Cochain::Residue { modulus, values } => {
                let b: Vec<BigInt> = values.iter().map(|&x| BigInt::from(x)).collect();
                ints(self.sq.classify(&self.lift_residue(&b, *modulus)))
            }
            Cochain::Torus(v) => self
                .sq
                .generators
                .iter()
                .map(|g| {
                    let s: BigRational = g
                        .iter()
                        .zip(v)
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .map(|(a, b)| b * BigRational::from_integer(a.clone()))
                        .sum();
                    frac(&s)
                })
                .collect(),
        })
    }

    /// `(a, b')` with `b' = π b` and `a = −H b' / m`, a cone cocycle over the residue cocycle `b`.
    fn lift_residue(&self, b: &[BigInt], m: u64) -> Vec<BigInt> {
        let (red, h) = self.residue.as_deref().expect("residue model");
        let bp = red.project(b);
        let mb = BigInt::from(m);
        let mut y: Vec<BigInt> = h
            .mul_vec(&bp)
            .into_iter()
            .map(|x| {
                debug_assert!(x.is_multiple_of(&mb));
                -(x / &mb)
            })
            .collect();
        y.extend(bp);
        y
    }

    /// A cocycle with the given coordinates (see [`Self::classify`] for their meaning).
    pub fn representative(&self, coords: &[BigRational]) -> Result<Cochain, HomologyError> {
        if coords.len() != self.num_coords() {
            return Err(HomologyError::LengthMismatch { got: coords.len(), expected: self.num_coords() });
        }
        match self.coeff {
            Coefficients::Torus => Ok(Cochain::Torus(self.torus_representative(coords))),
            _ => {
                let ints: Vec<BigInt> = coords.iter().map(|c| c.to_integer()).collect();
                let y = self.sq.element(&ints);
                Ok(match self.coeff {
                    Coefficients::Mod(m) => self.residue_of(&y, m),
                    _ => Cochain::Integer(y),
                })
            }
        }
    }

    fn torus_representative(&self, values: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.cochain_rank];
        for (v, p) in values.iter().zip(&self.sq.classifier) {
            if v.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(p) {
                if !x.is_zero() {
                    *o += v * BigRational::from_integer(x.clone());
                }
            }
        }
        out.iter().map(frac).collect()
    }

    /// Coordinate vector reduced into canonical range.
    pub fn normalize(&self, coords: &mut [BigRational]) {
        for (i, c) in coords.iter_mut().enumerate() {
            match (self.coeff, self.sq.order(i)) {
                (Coefficients::Torus, _) => *c = frac(c),
                (_, Some(d)) => *c = BigRational::from_integer(c.to_integer().mod_floor(d)),
                _ => {}
            }
        }
    }
}

/// A homomorphism between cohomology groups in coordinates: `target = matrix · source`.
///
/// For `𝕋` the coordinates are character values and the matrix is the transpose of the
/// map on transposed homology.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedMap {
    pub coeff: Coefficients,
    pub matrix: Vec<Vec<BigInt>>,
    pub source_orders: Vec<Option<BigInt>>,
    pub target_orders: Vec<Option<BigInt>>,
}

impl InducedMap {
    pub fn identity(g: &CohomologyGroup) -> Self {
        let k = g.num_coords();
        let orders: Vec<Option<BigInt>> = (0..k).map(|i| g.coord_order(i).cloned()).collect();
        let matrix = (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        Self { coeff: g.coeff, matrix, source_orders: orders.clone(), target_orders: orders }
    }

    /// Modulus governing entry `(i, j)`.
    fn entry_modulus(&self, i: usize, j: usize) -> Option<&BigInt> {
        match self.coeff {
            Coefficients::Torus => self.source_orders[j].as_ref(),
            _ => self.target_orders[i].as_ref(),
        }
    }

    fn normalize(&mut self) {
        for i in 0..self.matrix.len() {
            for j in 0..self.matrix[i].len() {
                if let Some(d) = self.entry_modulus(i, j).cloned() {
                    self.matrix[i][j] = self.matrix[i][j].mod_floor(&d);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.len() == self.matrix.first().map_or(0, Vec::len)
            && self.source_orders == self.target_orders
            && self
                .matrix
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, x)| *x == BigInt::from((i == j) as i64)))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &InducedMap) -> InducedMap {
        let (rows, inner, cols) = (self.matrix.len(), first.matrix.len(), first.source_orders.len());
        let matrix = (0..rows)
            .map(|i| (0..cols).map(|j| (0..inner).map(|k| &self.matrix[i][k] * &first.matrix[k][j]).sum()).collect())
            .collect();
        let mut out = InducedMap {
            coeff: self.coeff,
            matrix,
            source_orders: first.source_orders.clone(),
            target_orders: self.target_orders.clone(),
        };
        out.normalize();
        out
    }

    /// Matrix of the corresponding homomorphism of finitely generated groups, for exactness
    /// tests: the map itself for `ℤ`, `ℤ/m`, and the transpose for `𝕋` (a map of homology
    /// groups in the reverse direction).
    pub fn lattice_matrix(&self) -> Vec<Vec<BigInt>> {
        match self.coeff {
            Coefficients::Torus => {
                let (r, c) = (self.matrix.len(), self.source_orders.len());
                (0..c).map(|j| (0..r).map(|i| self.matrix[i][j].clone()).collect()).collect()
            }
            _ => self.matrix.clone(),
        }
    }
}

/// Map induced by `f` from `source = H^n(A)` to `target = H^{n+shift}(B)`.
pub fn induced_map(
    f: &ChainMap,
    source_complex: &CochainComplex,
    target_complex: &CochainComplex,
    source: &CohomologyGroup,
    target: &CohomologyGroup,
) -> Result<InducedMap, HomologyError> {
    if source.coeff != target.coeff {
        return Err(HomologyError::CoefficientMismatch(source.coeff, target.coeff));
    }
    let n = source.degree;
    if target.degree != n + f.shift {
        return Err(HomologyError::DegreeUnavailable(target.degree));
    }
    f.check(source_complex, target_complex).map_err(|e| match e {
        crate::gamma::transforms::ChainMapError::NotAChainMap { degree, max_violation } => {
            HomologyError::NotAChainMap { degree, max_violation }
        }
        crate::gamma::transforms::ChainMapError::ShapeMismatch { degree, .. } => HomologyError::MissingDegree(degree),
    })?;
    let fm = f.get(n).ok_or(HomologyError::MissingDegree(n))?;
    induced_by_matrix(fm, source, target)
}

/// Map on cohomology induced by a single cochain-level matrix `f: C^n(A) → C^{n'}(B)`,
/// assumed to be part of a chain map.
pub fn induced_by_matrix(f: &SparseMatrix, source: &CohomologyGroup, target: &CohomologyGroup) -> Result<InducedMap, HomologyError> {
    if f.shape() != (target.cochain_rank, source.cochain_rank) {
        return Err(HomologyError::LengthMismatch { got: f.cols(), expected: source.cochain_rank });
    }
    let source_orders: Vec<Option<BigInt>> = (0..source.num_coords()).map(|i| source.coord_order(i).cloned()).collect();
    let target_orders: Vec<Option<BigInt>> = (0..target.num_coords()).map(|i| target.coord_order(i).cloned()).collect();
    let matrix = match source.coeff {
        Coefficients::Integers | Coefficients::Mod(_) => {
            let mut cols = Vec::new();
            for g in source.generators() {
                let image = g.apply(f);
                let coords = target.classify(&image)?;
                cols.push(coords.into_iter().map(|c| c.to_integer()).collect::<Vec<_>>());
            }
            transpose(&cols, target.num_coords())
        }
        Coefficients::Torus => {
            // f^T on transposed homology: target generators → source coordinates
            let ft = f.transpose();
            let mut m = vec![vec![BigInt::zero(); source.num_coords()]; target.num_coords()];
            for (j, h) in target.sq.generators.iter().enumerate() {
                let image = apply_big(&ft, h);
                let coords = source.sq.classify(&image);
                for (i, c) in coords.into_iter().enumerate() {
                    // covariant on character values: target_j = Σ_i M_ij source_i
                    m[j][i] = c;
                }
            }
            m
        }
    };
    let mut out = InducedMap { coeff: source.coeff, matrix, source_orders, target_orders };
    out.normalize();
    Ok(out)
}

fn transpose(cols: &[Vec<BigInt>], rows: usize) -> Vec<Vec<BigInt>> {
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Result of testing one node of a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NodeExactness {
    pub node: usize,
    pub exact: bool,
    /// whether the composite through this node vanishes
    pub image_in_kernel: bool,
    /// a kernel element outside the image, or an image element outside the kernel
    pub witness: Option<Vec<String>>,
}

/// Checks `im f_{k−1} = ker f_k` at every interior node of a sequence of finitely generated
/// abelian groups `ℤ^{free} ⊕ ⊕ ℤ/d_i` (torus ranks count as free ranks here), given maps in
/// coordinates (torsion first, then free).
pub fn check_exact(nodes: &[AbelianGroupInfo], maps: &[Vec<Vec<BigInt>>]) -> Vec<NodeExactness> {
    assert_eq!(maps.len() + 1, nodes.len(), "need one map between consecutive nodes");
    let relations = |g: &AbelianGroupInfo| -> Vec<BigInt> {
        g.torsion.iter().map(|&d| BigInt::from(d)).chain(std::iter::repeat(BigInt::zero()).take(g.free_rank + g.torus_rank)).collect()
    };
    let dim = |g: &AbelianGroupInfo| g.torsion.len() + g.free_rank + g.torus_rank;
    let mut out = Vec::new();
    for k in 1..nodes.len().saturating_sub(1) {
        let (f, g) = (&maps[k - 1], &maps[k]);
        let kb = dim(&nodes[k]);
        let rel_b = relations(&nodes[k]);
        let rel_c = relations(&nodes[k + 1]);
        // image: columns of f plus the relations of B
        let mut img: Vec<Vec<BigInt>> = (0..dim(&nodes[k - 1])).map(|j| (0..kb).map(|i| f[i][j].clone()).collect()).collect();
        for (i, d) in rel_b.iter().enumerate() {
            let mut e = vec![BigInt::zero(); kb];
            e[i] = d.clone();
            img.push(e);
        }
        let img_hnf = lattice_hnf(&img, kb);
        // kernel: x with g·x ∈ span(relations of C), from the kernel of [g | diag(rel_c)]
        let kc = rel_c.len();
        let mut n = IntMatrix::zeros(kc, kb + kc);
        for i in 0..kc {
            for j in 0..kb {
                n[(i, j)] = g[i][j].clone();
            }
            n[(i, kb + i)] = rel_c[i].clone();
        }
        let s = smith_normal_form(&n, Track { right: true, ..Track::NONE });
        let v = s.v.unwrap();
        let mut ker: Vec<Vec<BigInt>> = (s.rank..kb + kc).map(|j| (0..kb).map(|i| v[(i, j)].clone()).collect()).collect();
        for (i, d) in rel_b.iter().enumerate() {
            let mut e = vec![BigInt::zero(); kb];
            e[i] = d.clone();
            ker.push(e);
        }
        let ker_hnf = lattice_hnf(&ker, kb);
        let fmt = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let img_out = img_hnf.iter().find(|r| !lattice_contains(&ker_hnf, r));
        let ker_out = ker_hnf.iter().find(|r| !lattice_contains(&img_hnf, r));
        out.push(NodeExactness {
            node: k,
            exact: img_out.is_none() && ker_out.is_none(),
            image_in_kernel: img_out.is_none(),
            witness: img_out.or(ker_out).map(|v| fmt(v)),
        });
    }
    out
}

/// Exactness of a sequence of cohomology groups joined by induced maps. For `𝕋` the test runs
/// on the dual sequence of transposed homology groups, which is exact exactly when the
/// original is.
pub fn check_exact_sequence(groups: &[&CohomologyGroup], maps: &[InducedMap]) -> Vec<NodeExactness> {
    let torus = groups.first().map_or(false, |g| g.coeff == Coefficients::Torus);
    let infos: Vec<AbelianGroupInfo> = groups.iter().map(|g| g.info.clone()).collect();
    let mats: Vec<Vec<Vec<BigInt>>> = maps.iter().map(InducedMap::lattice_matrix).collect();
    if !torus {
        return check_exact(&infos, &mats);
    }
    let rev_nodes: Vec<AbelianGroupInfo> = infos.into_iter().rev().collect();
    let rev_maps: Vec<Vec<Vec<BigInt>>> = mats.into_iter().rev().collect();
    let n = groups.len();
    let mut report = check_exact(&rev_nodes, &rev_maps);
    for r in &mut report {
        r.node = n - 1 - r.node;
    }
    report.reverse();
    report
}

/// Least common denominator of a `𝕋`-valued cochain.
pub fn max_denominator(c: &[BigRational]) -> BigInt {
    c.iter().map(|x| x.denom().clone()).fold(BigInt::one(), |a, b| a.lcm(&b)).abs()
}
