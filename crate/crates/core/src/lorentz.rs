//! Non-increasing rearrangement and the Lorentz functional `‖·‖_{p,τ}` of
//! uniform-grid samples.
//!
//! The rearrangement `f*` of `N` samples is the step function equal to the
//! `i`-th largest `|f|` on `[i/N, (i+1)/N)`. The Lorentz integral of that step
//! function is evaluated in closed form:
//!
//! `‖f‖_{p,τ}^τ = Σ_i (f*_i)^τ [((i+1)/N)^{τ/p} - (i/N)^{τ/p}]`.
//!
//! Sums run over the sorted values from the largest down, so results are
//! bit-stable for a given sample multiset.

use crate::error::Result;
use crate::grid::GridEvaluator;
use crate::params::LorentzParams;
use crate::poly::TrigPoly;
use crate::scalar::Real;

/// Samples of a function on the uniform grid `∏ {0, 1/N_j, ...}` of the unit
/// cube; each cell has measure `∏ 1/N_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample<T> {
    shape: Vec<usize>,
    values: Vec<T>,
}

impl<T: Real> GridSample<T> {
    pub fn new(shape: Vec<usize>, values: Vec<T>) -> Self {
        assert!(shape.iter().all(|&n| n > 0), "grid shape must be positive");
        assert_eq!(shape.iter().product::<usize>(), values.len(), "shape/value mismatch");
        GridSample { shape, values }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn cell_measure(&self) -> T {
        T::one() / T::of_usize(self.values.len())
    }
}

/// Sorted `|f|` profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Rearrangement<T> {
    values: Vec<T>,
}

impl<T: Real> Rearrangement<T> {
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn cell_measure(&self) -> T {
        T::one() / T::of_usize(self.values.len())
    }
}

/// Non-increasing rearrangement of `|values|`.
pub fn rearrange<T: Real>(g: &GridSample<T>) -> Rearrangement<T> {
    Rearrangement { values: sorted_abs(g.values()) }
}

fn sorted_abs<T: Real>(values: &[T]) -> Vec<T> {
    let mut v: Vec<T> = values.iter().map(|x| x.abs()).collect();
    v.sort_unstable_by(|a, b| b.partial_cmp(a).expect("samples must not be NaN"));
    v
}

/// Step weights `((i+1)/M)^a - (i/M)^a`, `a = τ/p`.
///
/// Computed as `(i/M)^a · expm1(a · ln(1 + 1/i))` for `i ≥ 1` to avoid
/// cancellation at large `i`.
pub fn step_weights<T: Real>(len: usize, exponent: T) -> Vec<T> {
    let m = T::of_usize(len);
    (0..len)
        .map(|i| {
            if i == 0 {
                (T::one() / m).powf(exponent)
            } else {
                let fi = T::of_usize(i);
                (fi / m).powf(exponent) * (exponent * (T::one() / fi).ln_1p()).exp_m1()
            }
        })
        .collect()
}

/// Lorentz norm of an already sorted profile, always via the step formula.
pub fn lorentz_norm_sorted<T: Real>(r: &Rearrangement<T>, lp: &LorentzParams<T>) -> T {
    let w = step_weights(r.values.len(), lp.ratio());
    weighted_power_sum(&r.values, &w, lp.tau)
}

fn weighted_power_sum<T: Real>(sorted: &[T], weights: &[T], tau: T) -> T {
    let top = match sorted.first() {
        Some(&t) if t > T::zero() => t,
        _ => return T::zero(),
    };
    // scale by the maximum so large or tiny samples cannot overflow
    let mut acc = T::zero();
    for (v, w) in sorted.iter().zip(weights) {
        if *v == T::zero() {
            break;
        }
        acc = acc + (*v / top).powf(tau) * *w;
    }
    top * acc.powf(T::one() / tau)
}

/// `‖f‖_{p,τ}` of grid samples. For `τ = p` this is the discrete `L_p` norm
/// and no sort is needed.
pub fn lorentz_norm<T: Real>(g: &GridSample<T>, lp: &LorentzParams<T>) -> T {
    if lp.tau == lp.p {
        discrete_lp(g.values(), lp.p)
    } else {
        lorentz_norm_sorted(&rearrange(g), lp)
    }
}

/// `{(1/M) Σ |f_i|^p}^{1/p}`.
pub fn discrete_lp<T: Real>(values: &[T], p: T) -> T {
    let top = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if top == T::zero() {
        return T::zero();
    }
    let sum = values.iter().fold(T::zero(), |s, v| s + (v.abs() / top).powf(p));
    top * (sum / T::of_usize(values.len())).powf(T::one() / p)
}

/// Lorentz functional with step weights precomputed for a fixed sample
/// count; the workhorse for repeated evaluations on one grid.
#[derive(Debug, Clone)]
pub struct LorentzFunctional<T> {
    lp: LorentzParams<T>,
    weights: Vec<T>,
}

impl<T: Real> LorentzFunctional<T> {
    pub fn new(lp: LorentzParams<T>, len: usize) -> Self {
        let weights = if lp.tau == lp.p { Vec::new() } else { step_weights(len, lp.ratio()) };
        LorentzFunctional { lp, weights }
    }

    pub fn params(&self) -> &LorentzParams<T> {
        &self.lp
    }

    pub fn norm_of(&self, values: &[T]) -> T {
        if self.lp.tau == self.lp.p {
            return discrete_lp(values, self.lp.p);
        }
        assert_eq!(values.len(), self.weights.len(), "sample count changed");
        weighted_power_sum(&sorted_abs(values), &self.weights, self.lp.tau)
    }

    pub fn norm(&self, g: &GridSample<T>) -> T {
        self.norm_of(g.values())
    }
}

/// `‖f‖_{p,τ}` of polynomials sampled on one fixed grid.
#[derive(Debug, Clone)]
pub struct PolyNorm<T: Real> {
    evaluator: GridEvaluator<T>,
    functional: LorentzFunctional<T>,
}

impl<T: Real> PolyNorm<T> {
    pub fn new(shape: &[usize], lp: LorentzParams<T>) -> Result<Self> {
        lp.validate()?;
        let evaluator = GridEvaluator::new(shape)?;
        let functional = LorentzFunctional::new(lp, evaluator.len());
        Ok(PolyNorm { evaluator, functional })
    }

    pub fn shape(&self) -> &[usize] {
        self.evaluator.shape()
    }

    pub fn params(&self) -> &LorentzParams<T> {
        self.functional.params()
    }

    pub fn evaluator(&self) -> &GridEvaluator<T> {
        &self.evaluator
    }

    pub fn functional(&self) -> &LorentzFunctional<T> {
        &self.functional
    }

    pub fn norm(&self, f: &TrigPoly<T>) -> Result<T> {
        if f.is_zero() {
            self.evaluator.check(f.degree())?;
            return Ok(T::zero());
        }
        let lp = self.params();
        if lp.p == T::of(2.0) && lp.tau == lp.p {
            // Alias-free grids make the discrete L2 norm a Parseval sum.
            self.evaluator.check(f.degree())?;
            return Ok(f.real_part_l2());
        }
        Ok(self.functional.norm(&self.evaluator.evaluate(f)?))
    }
}

/// Norm on `shape` together with the relative change observed when every
/// axis of the grid is doubled.
pub fn norm_with_convergence<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, shape: &[usize]) -> Result<(T, T)> {
    let coarse = PolyNorm::new(shape, *lp)?.norm(f)?;
    let doubled: Vec<usize> = shape.iter().map(|n| 2 * n).collect();
    let fine = PolyNorm::new(&doubled, *lp)?.norm(f)?;
    let delta = if fine == T::zero() { (fine - coarse).abs() } else { ((fine - coarse) / fine).abs() };
    Ok((coarse, delta))
}
