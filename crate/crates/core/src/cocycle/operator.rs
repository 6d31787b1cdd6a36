//! Monomial operators on `ℓ²(G^k)` and the pentagon equation.
//!
//! An operator acts by `(Wξ)(p) = e^{2πi·phase(p)} ξ(perm(p))`. Products are exact: permutation
//! tables compose and phases add as rationals modulo 1.

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::{frac, CocycleError, PentagonalCocycle};
use crate::matched_pair::MatchedPair;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("point map is not a bijection")]
    NotBijective,
    #[error("arity or base mismatch: {0:?} vs {1:?}")]
    Mismatch((usize, usize), (usize, usize)),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOperator {
    /// size of each leg
    pub base: usize,
    pub arity: usize,
    pub perm: Vec<u32>,
    /// in `[0, 1)`
    pub phase: Vec<BigRational>,
}

impl MonomialOperator {
    pub fn identity(base: usize, arity: usize) -> Self {
        let n = base.pow(arity as u32);
        Self { base, arity, perm: (0..n as u32).collect(), phase: vec![BigRational::zero(); n] }
    }

    /// Checks that `perm` is a bijection and reduces phases.
    pub fn new(base: usize, arity: usize, perm: Vec<u32>, phase: Vec<BigRational>) -> Result<Self, OperatorError> {
        let n = base.pow(arity as u32);
        if perm.len() != n || phase.len() != n {
            return Err(OperatorError::Mismatch((base, arity), (perm.len(), phase.len())));
        }
        let mut hit = vec![false; n];
        for &p in &perm {
            if p as usize >= n || std::mem::replace(&mut hit[p as usize], true) {
                return Err(OperatorError::NotBijective);
            }
        }
        Ok(Self { base, arity, perm, phase: phase.iter().map(frac).collect() })
    }

    pub fn points(&self) -> usize {
        self.perm.len()
    }

    /// The operator product `self · other`.
    pub fn compose(&self, other: &MonomialOperator) -> Result<MonomialOperator, OperatorError> {
        if (self.base, self.arity) != (other.base, other.arity) {
            return Err(OperatorError::Mismatch((self.base, self.arity), (other.base, other.arity)));
        }
        let perm = self.perm.iter().map(|&q| other.perm[q as usize]).collect();
        let phase = self.phase.iter().zip(&self.perm).map(|(a, &q)| frac(&(a + &other.phase[q as usize]))).collect();
        Ok(MonomialOperator { base: self.base, arity: self.arity, perm, phase })
    }

    /// The operator on `G^arity` acting through `self` (arity 2) on legs `i` and `j`.
    pub fn leg(&self, i: usize, j: usize, arity: usize) -> MonomialOperator {
        assert!(self.arity == 2 && i != j && i < arity && j < arity, "legs out of range");
        let b = self.base;
        let n = b.pow(arity as u32);
        let mut perm = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        let mut digits = vec![0usize; arity];
        for p in 0..n {
            let mut x = p;
            for d in digits.iter_mut().rev() {
                *d = x % b;
                x /= b;
            }
            let inner = digits[i] * b + digits[j];
            let image = self.perm[inner] as usize;
            digits[i] = image / b;
            digits[j] = image % b;
            perm.push(digits.iter().fold(0, |acc, &d| acc * b + d) as u32);
            phase.push(self.phase[inner].clone());
        }
        MonomialOperator { base: b, arity, perm, phase }
    }
}

/// `W_θ = W_2·θ·W_1` with `(W_1ξ)(x,y) = ξ(x·p1(y), y)` and `(W_2ξ)(x,y) = ξ(x, p2(x)⁻¹y)`:
/// the point map is `w = w_1∘w_2` and the phase at `(x, y)` is `θ(w_2(x, y))`.
/// On a finite group with counting measure the Radon–Nikodym factor is 1 because `w` is a bijection.
pub fn build_w(mp: &MatchedPair, theta: &PentagonalCocycle) -> Result<MonomialOperator, OperatorError> {
    theta.validate(mp)?;
    let n = mp.order();
    let mut perm = Vec::with_capacity(n * n);
    let mut phase = Vec::with_capacity(n * n);
    for x in 0..n {
        let back = mp.inv(mp.p2(x));
        for y in 0..n {
            let y2 = mp.mul(back, y);
            let x2 = mp.mul(x, mp.p1(y2));
            perm.push((x2 * n + y2) as u32);
            phase.push(theta.at(x, y2).clone());
        }
    }
    MonomialOperator::new(n, 2, perm, phase)
}

/// `W₁₂·W₁₃·W₂₃ = W₂₃·W₁₂` on `G³`.
pub fn check_pentagon(w: &MonomialOperator) -> Result<bool, OperatorError> {
    if w.arity != 2 {
        return Err(OperatorError::Mismatch((w.base, 2), (w.base, w.arity)));
    }
    let (w12, w13, w23) = (w.leg(0, 1, 3), w.leg(0, 2, 3), w.leg(1, 2, 3));
    let left = w12.compose(&w13)?.compose(&w23)?;
    let right = w23.compose(&w12)?;
    Ok(left == right)
}
