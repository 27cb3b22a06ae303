//! Parameter bundles and their validity constraints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::bit_length;
use crate::scalar::Real;

/// Lorentz indices `(p, τ)` with `1 < p < ∞`, `1 ≤ τ < ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzParams<T> {
    pub p: T,
    pub tau: T,
}

impl<T: Real> LorentzParams<T> {
    pub fn new(p: T, tau: T) -> Result<Self> {
        let lp = LorentzParams { p, tau };
        lp.validate()?;
        Ok(lp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p > T::one() && self.p.is_finite()) {
            return Err(Error::invalid("p", format!("need 1 < p < inf, got {}", self.p)));
        }
        if !(self.tau >= T::one() && self.tau.is_finite()) {
            return Err(Error::invalid("tau", format!("need 1 <= tau < inf, got {}", self.tau)));
        }
        Ok(())
    }

    /// The theorem harnesses work with `1 < τ < ∞`.
    pub fn require_strict_tau(&self) -> Result<()> {
        self.validate()?;
        if self.tau <= T::one() {
            return Err(Error::invalid("tau", "the equivalence theorems require tau > 1"));
        }
        Ok(())
    }

    /// `τ/p`, the exponent of the Lorentz weight `t^{τ/p - 1}`.
    pub fn ratio(&self) -> T {
        self.tau / self.p
    }
}

/// Smoothness parameters `(θ, b̄, k̄)`; `θ = ∞` is encoded as `T::infinity()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothParams<T> {
    pub theta: T,
    pub b: Vec<T>,
    pub k: Vec<u32>,
}

impl<T: Real> SmoothParams<T> {
    pub fn new(theta: T, b: Vec<T>, k: Vec<u32>) -> Result<Self> {
        let sp = SmoothParams { theta, b, k };
        sp.validate()?;
        Ok(sp)
    }

    /// Same `b` and `k` on every axis.
    pub fn uniform(dim: usize, theta: T, b: T, k: u32) -> Result<Self> {
        Self::new(theta, vec![b; dim], vec![k; dim])
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn is_sup(&self) -> bool {
        self.theta.is_infinite()
    }

    /// Lower bound `-1/θ` for every `b_j` (0 when `θ = ∞`).
    pub fn b_floor(&self) -> T {
        if self.is_sup() {
            T::zero()
        } else {
            -T::one() / self.theta
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > T::zero()) || self.theta.is_nan() {
            return Err(Error::invalid("theta", format!("need 0 < theta <= inf, got {}", self.theta)));
        }
        if self.b.len() != self.k.len() {
            return Err(Error::invalid("b", "b and k must have the same length"));
        }
        if self.b.is_empty() {
            return Err(Error::invalid("b", "at least one axis required"));
        }
        let floor = self.b_floor();
        for (j, &bj) in self.b.iter().enumerate() {
            if !(bj > floor) || !bj.is_finite() {
                return Err(Error::invalid(
                    "b",
                    format!("b_{} = {} must exceed -1/theta = {}", j + 1, bj, floor),
                ));
            }
        }
        if let Some(j) = self.k.iter().position(|&kj| kj == 0) {
            return Err(Error::invalid("k", format!("difference order k_{} must be >= 1", j + 1)));
        }
        Ok(())
    }

    pub fn with_b(&self, b: Vec<T>) -> Self {
        SmoothParams { theta: self.theta, b, k: self.k.clone() }
    }
}

/// Checks every invariant of both bundles and their dimensional agreement.
pub fn validate_params<T: Real>(lp: &LorentzParams<T>, sp: &SmoothParams<T>) -> Result<()> {
    lp.validate()?;
    sp.validate()
}

/// Dyadic block address `s̄ ∈ ℤ₊^m`. The block `ρ(s̄)` collects the
/// frequencies with `2^{s_j-1} ≤ |k_j| < 2^{s_j}`; any `s_j = 0` names the
/// empty block.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockIndex(pub Vec<u32>);

impl BlockIndex {
    pub fn new(s: Vec<u32>) -> Self {
        BlockIndex(s)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty_block(&self) -> bool {
        self.0.iter().any(|&s| s == 0)
    }

    /// The block containing frequency `k`, or `None` when some `k_j = 0`.
    pub fn of_frequency(k: &[i64]) -> Option<Self> {
        let s: Vec<u32> = k.iter().map(|kj| bit_length(kj.unsigned_abs())).collect();
        if s.iter().any(|&v| v == 0) {
            None
        } else {
            Some(BlockIndex(s))
        }
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        !self.is_empty_block()
            && k.len() == self.dim()
            && k.iter().zip(&self.0).all(|(kj, &s)| bit_length(kj.unsigned_abs()) == s)
    }

    /// Componentwise `self ≥ other`.
    pub fn dominates(&self, other: &BlockIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_bundle_passes() {
        let lp = LorentzParams::new(2.0, 2.0).unwrap();
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        assert!(validate_params(&lp, &sp).is_ok());
    }

    #[test]
    fn p_must_exceed_one() {
        let err = LorentzParams::new(1.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParams { ref param, .. } if param == "p"));
        assert!(LorentzParams::new(f64::INFINITY, 2.0).is_err());
        assert!(LorentzParams::new(2.0, 0.5).is_err());
        assert!(LorentzParams::new(2.0, 1.0).is_ok());
        assert!(LorentzParams::new(2.0, 1.0).unwrap().require_strict_tau().is_err());
    }

    #[test]
    fn b_must_exceed_minus_one_over_theta() {
        let err = SmoothParams::new(2.0, vec![-0.6], vec![1]).unwrap_err();
        assert!(matches!(err, Error::InvalidParams { ref param, .. } if param == "b"));
        // boundary itself is excluded
        assert!(SmoothParams::new(2.0, vec![-0.5], vec![1]).is_err());
        assert!(SmoothParams::new(2.0, vec![-0.49], vec![1]).is_ok());
        // theta = inf forces b > 0
        assert!(SmoothParams::new(f64::INFINITY, vec![0.0], vec![1]).is_err());
        assert!(SmoothParams::new(f64::INFINITY, vec![0.1], vec![1]).is_ok());
    }

    #[test]
    fn zero_difference_order_rejected() {
        assert!(SmoothParams::new(1.0, vec![0.0, 0.0], vec![1, 0]).is_err());
    }

    #[test]
    fn block_membership() {
        assert_eq!(BlockIndex::of_frequency(&[3]), Some(BlockIndex(vec![2])));
        assert_eq!(BlockIndex::of_frequency(&[-4, 1]), Some(BlockIndex(vec![3, 1])));
        assert_eq!(BlockIndex::of_frequency(&[0, 1]), None);
        assert!(BlockIndex(vec![2]).contains(&[-3]));
        assert!(!BlockIndex(vec![2]).contains(&[4]));
        assert!(!BlockIndex(vec![0]).contains(&[0]));
    }
}
