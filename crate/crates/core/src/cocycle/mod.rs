//! Pointwise cocycle identities for pairs `(U, V)`, for functions `R` on squares and for
//! pentagonal cocycles `θ`, and the bijections with cochains of the Kac and pentagonal
//! complexes.
//!
//! Everything is written additively. Each identity is materialized as a list of signed
//! table lookups ([`Instance`]), so the same data serves for numeric checks and for the
//! linear constraint matrices compared against coboundary matrices.

pub mod operator;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::gamma::Grid;
use crate::homology::{frac, Coefficients};
use crate::matched_pair::MatchedPair;
use crate::sparse::SparseMatrix;

pub use operator::{build_w, check_pentagon, MonomialOperator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleError {
    #[error("{what} has shape {got:?}, expected {expected:?}")]
    ShapeMismatch { what: &'static str, expected: Vec<usize>, got: Vec<usize> },
    #[error("{what} has a non-integral value {value} for coefficients {coeff}")]
    NotIntegral { what: &'static str, value: BigRational, coeff: Coefficients },
}

/// A function on a product of finite sets, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub shape: Vec<usize>,
    pub values: Vec<BigRational>,
}

impl Table {
    pub fn zeros(shape: &[usize]) -> Self {
        Self { shape: shape.to_vec(), values: vec![BigRational::zero(); shape.iter().product()] }
    }

    pub fn new(shape: &[usize], values: Vec<BigRational>) -> Result<Self, CocycleError> {
        if values.len() != shape.iter().product::<usize>() {
            return Err(CocycleError::ShapeMismatch { what: "table", expected: shape.to_vec(), got: vec![values.len()] });
        }
        Ok(Self { shape: shape.to_vec(), values })
    }

    pub fn flat(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.shape.len());
        index.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, index: &[usize]) -> &BigRational {
        &self.values[self.flat(index)]
    }

    pub fn set(&mut self, index: &[usize], value: BigRational) {
        let k = self.flat(index);
        self.values[k] = value;
    }

    fn expect_shape(&self, what: &'static str, shape: &[usize]) -> Result<(), CocycleError> {
        if self.shape != shape {
            return Err(CocycleError::ShapeMismatch { what, expected: shape.to_vec(), got: self.shape.clone() });
        }
        Ok(())
    }
}

/// Canonical representative of a value: in `[0, 1)` for `𝕋`, in `[0, m)` for `ℤ/m`.
pub fn reduce(coeff: Coefficients, x: &BigRational) -> BigRational {
    match coeff {
        Coefficients::Integers => x.clone(),
        Coefficients::Mod(m) => {
            let m = BigInt::from(m);
            BigRational::new(x.numer().mod_floor(&(x.denom() * &m)), x.denom().clone())
        }
        Coefficients::Torus => frac(x),
    }
}

fn check_values(coeff: Coefficients, what: &'static str, values: &[BigRational]) -> Result<(), CocycleError> {
    if coeff == Coefficients::Torus {
        return Ok(());
    }
    match values.iter().find(|x| !x.is_integer()) {
        Some(x) => Err(CocycleError::NotIntegral { what, value: x.clone(), coeff }),
        None => Ok(()),
    }
}

/// One instance of an identity: `Σ sign · value[var] = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    /// which identity, numbered from 1
    pub identity: u8,
    /// the group elements the identity is evaluated at
    pub args: Vec<usize>,
    pub terms: Vec<(i64, usize)>,
}

impl Instance {
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        self.terms.iter().map(|&(k, v)| &values[v] * BigInt::from(k)).sum()
    }
}

/// A failed instance with its residual (reduced into the coefficient module).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: u8,
    pub args: Vec<usize>,
    pub residual: BigRational,
}

fn violations(coeff: Coefficients, instances: &[Instance], values: &[BigRational]) -> Vec<Violation> {
    let mut out: Vec<Violation> = instances
        .iter()
        .filter_map(|inst| {
            let r = reduce(coeff, &inst.eval(values));
            (!r.is_zero()).then(|| Violation { identity: inst.identity, args: inst.args.clone(), residual: r })
        })
        .collect();
    out.sort_by(|a, b| (a.identity, &a.args).cmp(&(b.identity, &b.args)));
    out
}

/// Constraint matrix with one row per instance and one column per variable.
pub fn constraint_matrix(instances: &[Instance], vars: usize) -> SparseMatrix {
    let trip = instances.iter().enumerate().flat_map(|(i, inst)| inst.terms.iter().map(move |&(k, v)| (i, v, k))).collect();
    SparseMatrix::from_triplets(instances.len(), vars, trip)
}

/// Index helpers for functions on `G2 × G1` (the shape of `R`) and on `G2×G1×G1`, `G2×G2×G1`.
#[derive(Debug, Clone, Copy)]
struct Layout {
    n1: usize,
    n2: usize,
}

impl Layout {
    fn new(mp: &MatchedPair) -> Self {
        Self { n1: mp.g1().len(), n2: mp.g2().len() }
    }

    fn u_len(&self) -> usize {
        self.n2 * self.n1 * self.n1
    }

    fn v_len(&self) -> usize {
        self.n2 * self.n2 * self.n1
    }
}

/// A candidate pair `U: G2×G1×G1 → A`, `V: G2×G2×G1 → A`, tables indexed by subgroup positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CocyclePair {
    pub coeff: Coefficients,
    pub u: Table,
    pub v: Table,
}

impl CocyclePair {
    pub fn zero(mp: &MatchedPair, coeff: Coefficients) -> Self {
        let (n1, n2) = (mp.g1().len(), mp.g2().len());
        Self { coeff, u: Table::zeros(&[n2, n1, n1]), v: Table::zeros(&[n2, n2, n1]) }
    }

    /// `U(s, g, h)` at group elements.
    pub fn u_at(&self, mp: &MatchedPair, s: usize, g: usize, h: usize) -> &BigRational {
        self.u.get(&[mp.pos2(s), mp.pos1(g), mp.pos1(h)])
    }

    /// `V(s, t, g)` at group elements.
    pub fn v_at(&self, mp: &MatchedPair, s: usize, t: usize, g: usize) -> &BigRational {
        self.v.get(&[mp.pos2(s), mp.pos2(t), mp.pos1(g)])
    }

    pub fn validate(&self, mp: &MatchedPair) -> Result<(), CocycleError> {
        let (n1, n2) = (mp.g1().len(), mp.g2().len());
        self.u.expect_shape("U", &[n2, n1, n1])?;
        self.v.expect_shape("V", &[n2, n2, n1])?;
        check_values(self.coeff, "U", &self.u.values)?;
        check_values(self.coeff, "V", &self.v.values)
    }

    /// `U` values followed by `V` values, the variable order of [`pair_identities`].
    pub fn variables(&self) -> Vec<BigRational> {
        self.u.values.iter().chain(&self.v.values).cloned().collect()
    }

    fn from_variables(mp: &MatchedPair, coeff: Coefficients, vars: Vec<BigRational>) -> Self {
        let mut out = Self::zero(mp, coeff);
        let k = out.u.values.len();
        let mut vars = vars;
        out.v.values = vars.split_off(k);
        out.u.values = vars;
        for x in out.u.values.iter_mut().chain(out.v.values.iter_mut()) {
            *x = reduce(coeff, x);
        }
        out
    }
}

/// The three identities of a compatible pair, over all `s,t,r ∈ G2` and `g,h,k ∈ G1`:
///
/// 1. `U(p2(sg),h,k) − U(s,gh,k) + U(s,g,hk) − U(s,g,h) = 0`
/// 2. `V(t,r,g) − V(st,r,g) + V(s,tr,g) − V(s,t,p1(rg)) = 0`
/// 3. `U(t,g,h) − U(st,g,h) + U(s,p1(tg),p1(p2(tg)h)) + V(p2(s·p1(tg)),p2(tg),h) − V(s,t,gh) + V(s,t,g) = 0`
///
/// Variables are `U` (flattened) followed by `V`.
pub fn pair_identities(mp: &MatchedPair) -> Vec<Instance> {
    let l = Layout::new(mp);
    let u = |s: usize, g: usize, h: usize| (mp.pos2(s) * l.n1 + mp.pos1(g)) * l.n1 + mp.pos1(h);
    let v = |s: usize, t: usize, g: usize| l.u_len() + (mp.pos2(s) * l.n2 + mp.pos2(t)) * l.n1 + mp.pos1(g);
    let m = |a: usize, b: usize| mp.mul(a, b);
    let g1 = mp.g1().elements();
    let g2 = mp.g2().elements();
    let mut out = Vec::new();
    for &s in g2 {
        for &g in g1 {
            for &h in g1 {
                for &k in g1 {
                    out.push(Instance {
                        identity: 1,
                        args: vec![s, g, h, k],
                        terms: vec![(1, u(mp.p2(m(s, g)), h, k)), (-1, u(s, m(g, h), k)), (1, u(s, g, m(h, k))), (-1, u(s, g, h))],
                    });
                }
            }
        }
    }
    for &s in g2 {
        for &t in g2 {
            for &r in g2 {
                for &g in g1 {
                    out.push(Instance {
                        identity: 2,
                        args: vec![s, t, r, g],
                        terms: vec![(1, v(t, r, g)), (-1, v(m(s, t), r, g)), (1, v(s, m(t, r), g)), (-1, v(s, t, mp.p1(m(r, g))))],
                    });
                }
            }
        }
    }
    for &s in g2 {
        for &t in g2 {
            for &g in g1 {
                for &h in g1 {
                    let tg = m(t, g);
                    let (a, b) = (mp.p1(tg), mp.p2(tg));
                    out.push(Instance {
                        identity: 3,
                        args: vec![s, t, g, h],
                        terms: vec![
                            (1, u(t, g, h)),
                            (-1, u(m(s, t), g, h)),
                            (1, u(s, a, mp.p1(m(b, h)))),
                            (1, v(mp.p2(m(s, a)), b, h)),
                            (-1, v(s, t, m(g, h))),
                            (1, v(s, t, g)),
                        ],
                    });
                }
            }
        }
    }
    out
}

/// Violated instances of the pair identities, sorted by identity and arguments.
pub fn check_pair_cocycle(mp: &MatchedPair, pair: &CocyclePair) -> Result<Vec<Violation>, CocycleError> {
    pair.validate(mp)?;
    Ok(violations(pair.coeff, &pair_identities(mp), &pair.variables()))
}

/// Expressions of `U_R` and `V_R` as signed lookups into `R` (indexed `pos2(s)·|G1| + pos1(g)`):
/// `U_R(s,g,h) = −R(p2(sg),h) + R(s,gh) − R(s,g)` and `V_R(s,t,g) = R(t,g) − R(st,g) + R(s,p1(tg))`.
/// Returned in the variable order of [`pair_identities`].
fn trivial_pair_terms(mp: &MatchedPair) -> Vec<Instance> {
    let l = Layout::new(mp);
    let r = |s: usize, g: usize| mp.pos2(s) * l.n1 + mp.pos1(g);
    let m = |a: usize, b: usize| mp.mul(a, b);
    let mut out = Vec::with_capacity(l.u_len() + l.v_len());
    for &s in mp.g2().elements() {
        for &g in mp.g1().elements() {
            for &h in mp.g1().elements() {
                out.push(Instance {
                    identity: 1,
                    args: vec![s, g, h],
                    terms: vec![(-1, r(mp.p2(m(s, g)), h)), (1, r(s, m(g, h))), (-1, r(s, g))],
                });
            }
        }
    }
    for &s in mp.g2().elements() {
        for &t in mp.g2().elements() {
            for &g in mp.g1().elements() {
                out.push(Instance {
                    identity: 2,
                    args: vec![s, t, g],
                    terms: vec![(1, r(t, g)), (-1, r(m(s, t), g)), (1, r(s, mp.p1(m(t, g))))],
                });
            }
        }
    }
    out
}

fn expect_r(mp: &MatchedPair, coeff: Coefficients, r: &Table) -> Result<(), CocycleError> {
    r.expect_shape("R", &[mp.g2().len(), mp.g1().len()])?;
    check_values(coeff, "R", &r.values)
}

/// The trivial pair `(U_R, V_R)` of `R: G2×G1 → A`.
pub fn coboundary_pair(mp: &MatchedPair, coeff: Coefficients, r: &Table) -> Result<CocyclePair, CocycleError> {
    expect_r(mp, coeff, r)?;
    let vars = trivial_pair_terms(mp).iter().map(|i| i.eval(&r.values)).collect();
    Ok(CocyclePair::from_variables(mp, coeff, vars))
}

/// Whether `U_R` and `V_R` both vanish.
pub fn check_one_cocycle(mp: &MatchedPair, coeff: Coefficients, r: &Table) -> Result<bool, CocycleError> {
    expect_r(mp, coeff, r)?;
    Ok(violations(coeff, &trivial_pair_terms(mp), &r.values).is_empty())
}

/// The identities of [`check_one_cocycle`] as instances over `R` variables.
pub fn one_cocycle_identities(mp: &MatchedPair) -> Vec<Instance> {
    trivial_pair_terms(mp)
}

/// Coordinate in `C² = L(Γ_12) ⊕ L(Γ_21)` of each pair variable: `V(s,t,g)` sits on the wide
/// grid with top row `s, t` and right edge `g`, `U(s,g,h)` on the tall grid with top edge
/// `s` and right column `g, h`.
pub fn pair_to_kac_index(mp: &MatchedPair) -> Vec<usize> {
    let l = Layout::new(mp);
    let wide = l.n1 * l.n2 * l.n2;
    let mut out = Vec::with_capacity(l.u_len() + l.v_len());
    for &s in mp.g2().elements() {
        for &g in mp.g1().elements() {
            for &h in mp.g1().elements() {
                out.push(wide + Grid::from_top_right(mp, &[s], &[g, h]).rank(mp) as usize);
            }
        }
    }
    for &s in mp.g2().elements() {
        for &t in mp.g2().elements() {
            for &g in mp.g1().elements() {
                out.push(Grid::from_top_right(mp, &[s, t], &[g]).rank(mp) as usize);
            }
        }
    }
    out
}

/// Coordinate in `C¹ = L(Γ_11)` of `R(s, g)`: the square with top edge `s` and right edge `g`.
pub fn one_cochain_index(mp: &MatchedPair) -> Vec<usize> {
    let mut out = Vec::new();
    for &s in mp.g2().elements() {
        for &g in mp.g1().elements() {
            out.push(Grid::from_top_right(mp, &[s], &[g]).rank(mp) as usize);
        }
    }
    out
}

fn scatter(index: &[usize], values: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); index.len()];
    for (&i, x) in index.iter().zip(values) {
        out[i] = x.clone();
    }
    out
}

fn gather(index: &[usize], v: &[BigRational]) -> Vec<BigRational> {
    index.iter().map(|&i| v[i].clone()).collect()
}

fn expect_len(what: &'static str, v: &[BigRational], n: usize) -> Result<(), CocycleError> {
    if v.len() != n {
        return Err(CocycleError::ShapeMismatch { what, expected: vec![n], got: vec![v.len()] });
    }
    Ok(())
}

/// The Kac 2-cochain of a pair.
pub fn pair_to_kac_cochain(mp: &MatchedPair, pair: &CocyclePair) -> Result<Vec<BigRational>, CocycleError> {
    pair.validate(mp)?;
    Ok(scatter(&pair_to_kac_index(mp), &pair.variables()))
}

/// Inverse of [`pair_to_kac_cochain`].
pub fn kac_cochain_to_pair(mp: &MatchedPair, coeff: Coefficients, v: &[BigRational]) -> Result<CocyclePair, CocycleError> {
    let index = pair_to_kac_index(mp);
    expect_len("Kac 2-cochain", v, index.len())?;
    check_values(coeff, "Kac 2-cochain", v)?;
    Ok(CocyclePair::from_variables(mp, coeff, gather(&index, v)))
}

/// The Kac 1-cochain of `R`.
pub fn one_cochain_to_kac(mp: &MatchedPair, r: &Table) -> Result<Vec<BigRational>, CocycleError> {
    r.expect_shape("R", &[mp.g2().len(), mp.g1().len()])?;
    Ok(scatter(&one_cochain_index(mp), &r.values))
}

/// Inverse of [`one_cochain_to_kac`].
pub fn kac_to_one_cochain(mp: &MatchedPair, v: &[BigRational]) -> Result<Table, CocycleError> {
    let index = one_cochain_index(mp);
    expect_len("Kac 1-cochain", v, index.len())?;
    Table::new(&[mp.g2().len(), mp.g1().len()], gather(&index, v))
}

/// `θ: G×G → A`, indexed by group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonalCocycle {
    pub coeff: Coefficients,
    pub theta: Table,
}

impl PentagonalCocycle {
    pub fn zero(mp: &MatchedPair, coeff: Coefficients) -> Self {
        Self { coeff, theta: Table::zeros(&[mp.order(), mp.order()]) }
    }

    pub fn at(&self, x: usize, y: usize) -> &BigRational {
        self.theta.get(&[x, y])
    }

    pub fn validate(&self, mp: &MatchedPair) -> Result<(), CocycleError> {
        self.theta.expect_shape("θ", &[mp.order(), mp.order()])?;
        check_values(self.coeff, "θ", &self.theta.values)
    }
}

/// `θ(x,y) + θ(x·p1(y), p2(y)·z) + θ(y,z) − θ(p2(x)·y, z) − θ(x, y·p1(z)) = 0` over `G³`.
pub fn pentagonal_identities(mp: &MatchedPair) -> Vec<Instance> {
    let n = mp.order();
    let t = |x: usize, y: usize| x * n + y;
    let m = |a: usize, b: usize| mp.mul(a, b);
    let mut out = Vec::with_capacity(n * n * n);
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                out.push(Instance {
                    identity: 1,
                    args: vec![x, y, z],
                    terms: vec![
                        (1, t(x, y)),
                        (1, t(m(x, mp.p1(y)), m(mp.p2(y), z))),
                        (1, t(y, z)),
                        (-1, t(m(mp.p2(x), y), z)),
                        (-1, t(x, m(y, mp.p1(z)))),
                    ],
                });
            }
        }
    }
    out
}

pub fn check_pentagonal_cocycle(mp: &MatchedPair, theta: &PentagonalCocycle) -> Result<Vec<Violation>, CocycleError> {
    theta.validate(mp)?;
    Ok(violations(theta.coeff, &pentagonal_identities(mp), &theta.theta.values))
}

/// `θ(x,y) = a(x) + a(p2(x)·y) − a(x·p1(y)) − a(y)` for `a: G → A`.
pub fn pentagonal_coboundary(mp: &MatchedPair, coeff: Coefficients, a: &[BigRational]) -> Result<PentagonalCocycle, CocycleError> {
    let n = mp.order();
    expect_len("a", a, n)?;
    check_values(coeff, "a", a)?;
    let mut out = PentagonalCocycle::zero(mp, coeff);
    for x in 0..n {
        for y in 0..n {
            let v = &a[x] + &a[mp.mul(mp.p2(x), y)] - &a[mp.mul(x, mp.p1(y))] - &a[y];
            out.theta.set(&[x, y], reduce(coeff, &v));
        }
    }
    Ok(out)
}

/// `θ̃(x, y) = θ(x, p2(x)⁻¹·y)`.
pub fn theta_to_thetatilde(mp: &MatchedPair, theta: &PentagonalCocycle) -> Result<PentagonalCocycle, CocycleError> {
    theta.validate(mp)?;
    let n = mp.order();
    let mut out = PentagonalCocycle::zero(mp, theta.coeff);
    for x in 0..n {
        let back = mp.inv(mp.p2(x));
        for y in 0..n {
            out.theta.set(&[x, y], theta.at(x, mp.mul(back, y)).clone());
        }
    }
    Ok(out)
}

/// Coordinate in `E² = L(Γ_22)` of `θ(x, y)`: the grid whose diagonal squares have products `x`, `y`.
pub fn theta_index(mp: &MatchedPair) -> Vec<usize> {
    let n = mp.order();
    (0..n * n).map(|k| Grid::from_diagonal(mp, &[k / n, k % n]).rank(mp) as usize).collect()
}

/// Coordinate in `E¹ = L(Γ_11)` of `a(x)`.
pub fn pentagonal_one_index(mp: &MatchedPair) -> Vec<usize> {
    (0..mp.order()).map(|x| Grid::from_diagonal(mp, &[x]).rank(mp) as usize).collect()
}

pub fn theta_to_cochain(mp: &MatchedPair, theta: &PentagonalCocycle) -> Result<Vec<BigRational>, CocycleError> {
    theta.validate(mp)?;
    Ok(scatter(&theta_index(mp), &theta.theta.values))
}

pub fn cochain_to_theta(mp: &MatchedPair, coeff: Coefficients, v: &[BigRational]) -> Result<PentagonalCocycle, CocycleError> {
    let index = theta_index(mp);
    expect_len("pentagonal 2-cochain", v, index.len())?;
    check_values(coeff, "pentagonal 2-cochain", v)?;
    let n = mp.order();
    let values = gather(&index, v).iter().map(|x| reduce(coeff, x)).collect();
    Ok(PentagonalCocycle { coeff, theta: Table::new(&[n, n], values)? })
}

#[cfg(test)]
mod tests;
