//! Mixed differences, lattice approximations of the mixed modulus of
//! smoothness and the log-weighted modulus seminorm.
//!
//! Step sizes `h̄` and moduli arguments `t̄` are in radians: `Δ_h f(y) =
//! f(y + h) - f(y)` for `f(y) = Σ a_k e^{iky}`.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::auto_grid;
use crate::index::{bit_length, MultiRange};
use crate::lorentz::PolyNorm;
use crate::params::{LorentzParams, SmoothParams};
use crate::poly::TrigPoly;
use crate::scalar::Real;

/// Default lattice points per axis for the sup over `h̄`.
pub const DEFAULT_H_GRID: usize = 17;

/// Largest `ν_max` the automatic truncation will try.
pub const NU_MAX_CAP: usize = 40;

/// Extra shells summed explicitly with the tail bound before the separable
/// far-field estimate takes over.
const TAIL_SHELLS: usize = 60;

/// Per-axis multipliers `(e^{i n h_j} - 1)^{k_j}`, `n ∈ [-n_j, n_j]`.
pub fn difference_factors<T: Real>(degree: &[usize], h: &[T], k: &[u32]) -> Vec<Vec<Complex<T>>> {
    degree
        .iter()
        .zip(h.iter().zip(k))
        .map(|(&n, (&hj, &kj))| {
            (-(n as i64)..=n as i64)
                .map(|freq| {
                    let phase = T::of_i64(freq) * hj;
                    (Complex::new(phase.cos(), phase.sin()) - Complex::new(T::one(), T::zero())).powu(kj)
                })
                .collect()
        })
        .collect()
}

/// `Δ_h̄^k̄ f`, computed exactly in coefficient space.
pub fn mixed_difference<T: Real>(f: &TrigPoly<T>, h: &[T], k: &[u32]) -> TrigPoly<T> {
    assert_eq!(h.len(), f.dim(), "step dimension");
    assert_eq!(k.len(), f.dim(), "order dimension");
    f.scale_separable(&difference_factors(f.degree(), h, k))
}

/// One lattice approximation of `ω_k̄(f, t̄)_{p,τ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusValue<T> {
    pub value: T,
    /// Step vector attaining `value`.
    pub argmax: Vec<T>,
    /// Bound on how far the true sup can exceed the coarse-lattice max.
    pub tolerance: T,
}

/// Memoized `h̄ ↦ ‖Δ_h̄^k̄ f‖_{p,τ}`.
#[derive(Debug, Clone)]
struct DiffNorms<T: Real> {
    f: TrigPoly<T>,
    k: Vec<u32>,
    norm: PolyNorm<T>,
    memo: BTreeMap<Vec<u64>, (Vec<T>, T)>,
}

fn key<T: Real>(h: &[T]) -> Vec<u64> {
    h.iter().map(|x| x.to_f64_lossy().to_bits()).collect()
}

impl<T: Real> DiffNorms<T> {
    fn new(f: &TrigPoly<T>, k: &[u32], norm: PolyNorm<T>) -> Result<Self> {
        if k.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: k.len() });
        }
        norm.evaluator().check(f.degree())?;
        Ok(DiffNorms { f: f.trimmed(), k: k.to_vec(), norm, memo: BTreeMap::new() })
    }

    /// Evaluates every not yet memoized point; returns the values in input order.
    fn eval_many(&mut self, points: &[Vec<T>]) -> Result<Vec<T>> {
        let mut fresh: Vec<Vec<T>> = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for h in points {
            let kk = key(h);
            if !self.memo.contains_key(&kk) && seen.insert(kk) {
                fresh.push(h.clone());
            }
        }
        let f = &self.f;
        let k = &self.k;
        let norm = &self.norm;
        let values = fresh
            .par_iter()
            .map(|h| {
                if h.iter().any(|&x| x == T::zero()) {
                    return Ok(T::zero());
                }
                norm.norm(&mixed_difference(f, h, k))
            })
            .collect::<Result<Vec<T>>>()?;
        for (h, v) in fresh.into_iter().zip(values) {
            self.memo.insert(key(&h), (h, v));
        }
        Ok(points.iter().map(|h| self.memo[&key(h)].1).collect())
    }

    /// Sup-norm Lipschitz constants of `h_j ↦ Δ_h̄^k̄ f`.
    fn lipschitz(&self) -> Vec<T> {
        let m = self.f.dim();
        let total: u32 = self.k.iter().sum();
        let two_pow = T::of(2.0).powi(total as i32 - 1);
        (0..m)
            .map(|j| {
                let mut acc = T::zero();
                self.f.for_each_coeff(|kk, a| {
                    acc = acc + a.norm() * T::of_i64(kk[j].abs()) * T::of_usize(self.k[j] as usize);
                });
                acc * two_pow
            })
            .collect()
    }

    /// Lattice max over `∏ {i t_j/(g-1)}` followed by one refinement pass at
    /// half spacing around the argmax.
    fn lattice_max(&mut self, t: &[T], g: usize) -> Result<(T, Vec<T>)> {
        let m = t.len();
        let step: Vec<T> = t.iter().map(|&tj| tj / T::of_usize(g - 1)).collect();
        let points: Vec<Vec<T>> = MultiRange::cube(m, 0, g as i64 - 1)
            .iter()
            .map(|i| i.iter().zip(&step).map(|(&ij, &s)| T::of_i64(ij) * s).collect())
            .collect();
        let values = self.eval_many(&points)?;
        let (mut best, mut arg) = argmax(&points, &values);
        let half: Vec<T> = step.iter().map(|&s| s * T::of(0.5)).collect();
        let refine: Vec<Vec<T>> = MultiRange::cube(m, -2, 2)
            .iter()
            .filter_map(|d| {
                let h: Vec<T> = (0..m).map(|j| arg[j] + T::of_i64(d[j]) * half[j]).collect();
                h.iter().zip(t).all(|(&x, &tj)| x >= T::zero() && x <= tj).then_some(h)
            })
            .collect();
        let rv = self.eval_many(&refine)?;
        let (rb, ra) = argmax(&refine, &rv);
        if rb > best {
            best = rb;
            arg = ra;
        }
        Ok((best, arg))
    }
}

fn argmax<T: Real>(points: &[Vec<T>], values: &[T]) -> (T, Vec<T>) {
    let mut best = T::neg_infinity();
    let mut arg = points[0].clone();
    for (p, &v) in points.iter().zip(values) {
        if v > best {
            best = v;
            arg = p.clone();
        }
    }
    (best, arg)
}

fn check_h_grid(h_grid: usize) -> Result<()> {
    if h_grid < 2 {
        return Err(Error::invalid("h_grid", "need at least 2 lattice points per axis"));
    }
    Ok(())
}

fn check_t<T: Real>(t: &[T]) -> Result<()> {
    if t.iter().any(|&x| !(x > T::zero()) || !x.is_finite()) {
        return Err(Error::invalid("t", "modulus arguments must be positive and finite"));
    }
    Ok(())
}

/// `ω_k̄(f, t̄)_{p,τ}` as the max of `‖Δ_h̄^k̄ f‖` over `h̄ ∈ ∏[0, t_j]` on a
/// uniform `h_grid^m` lattice plus one refinement pass; a lower bound of the
/// true sup. Uses [`auto_grid`] for the samples.
pub fn mixed_modulus<T: Real>(
    f: &TrigPoly<T>,
    t: &[T],
    k: &[u32],
    lp: &LorentzParams<T>,
    h_grid: usize,
) -> Result<ModulusValue<T>> {
    let norm = PolyNorm::new(&auto_grid(f.degree()), *lp)?;
    mixed_modulus_on(f, t, k, &norm, h_grid)
}

/// [`mixed_modulus`] on a caller-chosen grid.
pub fn mixed_modulus_on<T: Real>(
    f: &TrigPoly<T>,
    t: &[T],
    k: &[u32],
    norm: &PolyNorm<T>,
    h_grid: usize,
) -> Result<ModulusValue<T>> {
    check_h_grid(h_grid)?;
    check_t(t)?;
    if t.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: t.len() });
    }
    let mut d = DiffNorms::new(f, k, norm.clone())?;
    let (value, argmax) = d.lattice_max(t, h_grid)?;
    let tolerance = lattice_tolerance(&d.lipschitz(), t, h_grid);
    Ok(ModulusValue { value, argmax, tolerance })
}

fn lattice_tolerance<T: Real>(lip: &[T], t: &[T], g: usize) -> T {
    lip.iter()
        .zip(t)
        .fold(T::zero(), |s, (&l, &tj)| s + l * tj / T::of_usize(g - 1) * T::of(0.5))
}

/// `ω_k̄(f, t̄)` on the dyadic grid `t_j = 2^{-ν_j+1}`, `ν_j = 1..ν_max`.
///
/// All lattices are drawn from one memo, and every stored value is the max
/// over all evaluated steps `h̄ ≤ t̄`, so the stored values are monotone in
/// each `t_j` and remain lower bounds of the true moduli.
#[derive(Debug, Clone)]
pub struct ModulusGrid<T: Real> {
    nu_max: usize,
    h_grid: usize,
    t_values: Vec<T>,
    values: Vec<T>,
    argmax: Vec<Vec<T>>,
    tolerance: Vec<T>,
    lipschitz: Vec<T>,
    diffs: DiffNorms<T>,
}

impl<T: Real> ModulusGrid<T> {
    pub fn build(f: &TrigPoly<T>, k: &[u32], norm: PolyNorm<T>, nu_max: usize, h_grid: usize) -> Result<Self> {
        check_h_grid(h_grid)?;
        if nu_max == 0 {
            return Err(Error::invalid("nu_max", "need nu_max >= 1"));
        }
        let diffs = DiffNorms::new(f, k, norm)?;
        let lipschitz = diffs.lipschitz();
        let mut g = ModulusGrid {
            nu_max: 0,
            h_grid,
            t_values: Vec::new(),
            values: Vec::new(),
            argmax: Vec::new(),
            tolerance: Vec::new(),
            lipschitz,
            diffs,
        };
        g.extend_to(nu_max)?;
        Ok(g)
    }

    /// Grows the grid to `nu_max`, reusing every memoized evaluation.
    pub fn extend_to(&mut self, nu_max: usize) -> Result<()> {
        if nu_max <= self.nu_max {
            return Ok(());
        }
        let m = self.dim();
        let old = self.nu_max;
        self.t_values = (1..=nu_max).map(|nu| dyadic_t::<T>(nu)).collect();
        for nu in MultiRange::cube(m, 1, nu_max as i64).iter() {
            if nu.iter().all(|&v| v as usize <= old) {
                continue;
            }
            let t: Vec<T> = nu.iter().map(|&v| self.t_values[v as usize - 1]).collect();
            self.diffs.lattice_max(&t, self.h_grid)?;
        }
        self.nu_max = nu_max;
        self.recompute();
        Ok(())
    }

    fn recompute(&mut self) {
        let m = self.dim();
        let cells: Vec<Vec<i64>> = MultiRange::cube(m, 1, self.nu_max as i64).iter().collect();
        let entries: Vec<&(Vec<T>, T)> = self.diffs.memo.values().collect();
        let t_values = &self.t_values;
        let results: Vec<(T, Vec<T>)> = cells
            .par_iter()
            .map(|nu| {
                let t: Vec<T> = nu.iter().map(|&v| t_values[v as usize - 1]).collect();
                let mut best = T::zero();
                let mut arg = vec![T::zero(); m];
                for (h, v) in &entries {
                    if *v > best && h.iter().zip(&t).all(|(a, b)| a <= b) {
                        best = *v;
                        arg = h.clone();
                    }
                }
                (best, arg)
            })
            .collect();
        self.values = results.iter().map(|r| r.0).collect();
        self.argmax = results.into_iter().map(|r| r.1).collect();
        self.tolerance = cells
            .iter()
            .map(|nu| {
                let t: Vec<T> = nu.iter().map(|&v| t_values[v as usize - 1]).collect();
                lattice_tolerance(&self.lipschitz, &t, self.h_grid)
            })
            .collect();
    }

    pub fn dim(&self) -> usize {
        self.diffs.f.dim()
    }

    pub fn nu_max(&self) -> usize {
        self.nu_max
    }

    pub fn h_grid(&self) -> usize {
        self.h_grid
    }

    /// `t_ν = 2^{-ν+1}` for `ν = 1..ν_max` (shared by every axis).
    pub fn t_values(&self) -> &[T] {
        &self.t_values
    }

    pub fn evaluations(&self) -> usize {
        self.diffs.memo.len()
    }

    fn offset(&self, nu: &[usize]) -> usize {
        nu.iter().fold(0, |o, &v| {
            assert!(v >= 1 && v <= self.nu_max, "nu out of range");
            o * self.nu_max + (v - 1)
        })
    }

    /// `ω(2^{-ν̄+1})`.
    pub fn value(&self, nu: &[usize]) -> T {
        self.values[self.offset(nu)]
    }

    pub fn argmax(&self, nu: &[usize]) -> &[T] {
        &self.argmax[self.offset(nu)]
    }

    pub fn tolerance(&self, nu: &[usize]) -> T {
        self.tolerance[self.offset(nu)]
    }

    /// `(ν̄, t̄, ω)` rows in row-major `ν̄` order.
    pub fn rows(&self) -> Vec<(Vec<usize>, Vec<T>, T)> {
        MultiRange::cube(self.dim(), 1, self.nu_max as i64)
            .iter()
            .map(|nu| {
                let nu: Vec<usize> = nu.into_iter().map(|v| v as usize).collect();
                let t = nu.iter().map(|&v| self.t_values[v - 1]).collect();
                let w = self.value(&nu);
                (nu, t, w)
            })
            .collect()
    }
}

fn dyadic_t<T: Real>(nu: usize) -> T {
    T::of(2.0).powi(1 - nu as i32)
}

/// Upper bounds for `ω_k̄(f, t̄)` used to certify truncated sums: the
/// smaller of the sup-norm bound `Σ |a_k| ∏ min(2, |k_j| t_j)^{k_j}` and
/// `min_E ∏_{j∈E} t_j^{k_j} ∏_{j∉E} 2^{k_j} ‖∂_E^{k_E} f‖_{p,τ}`.
#[derive(Debug, Clone)]
pub struct TailBound<T> {
    k: Vec<u32>,
    degree: Vec<usize>,
    coeffs: Vec<(T, Vec<u64>)>,
    abs_sum: T,
    derivative_norms: Vec<T>,
}

impl<T: Real> TailBound<T> {
    pub fn new(f: &TrigPoly<T>, k: &[u32], norm: &PolyNorm<T>) -> Result<Self> {
        let m = f.dim();
        let f = f.trimmed();
        let mut coeffs = Vec::new();
        f.for_each_coeff(|kk, a| {
            let r = a.norm();
            if r > T::zero() {
                coeffs.push((r, kk.iter().map(|x| x.unsigned_abs()).collect()));
            }
        });
        let abs_sum = coeffs.iter().fold(T::zero(), |s, c| s + c.0);
        let derivative_norms = (0u32..(1 << m))
            .map(|e| {
                let alpha: Vec<u32> = (0..m).map(|j| if e >> j & 1 == 1 { k[j] } else { 0 }).collect();
                norm.norm(&f.derivative(&alpha))
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(TailBound { k: k.to_vec(), degree: f.degree().to_vec(), coeffs, abs_sum, derivative_norms })
    }

    pub fn at(&self, t: &[T]) -> T {
        let m = self.k.len();
        let two = T::of(2.0);
        let mut sup = T::zero();
        for (r, kk) in &self.coeffs {
            let mut w = *r;
            for j in 0..m {
                w = w * (T::of_usize(kk[j] as usize) * t[j]).min(two).powi(self.k[j] as i32);
            }
            sup = sup + w;
        }
        let mut best = sup;
        for (e, &dn) in self.derivative_norms.iter().enumerate() {
            let mut w = dn;
            for j in 0..m {
                w = w * if e >> j & 1 == 1 { t[j].powi(self.k[j] as i32) } else { two.powi(self.k[j] as i32) };
            }
            best = best.min(w);
        }
        best
    }

    /// Separable majorant factor `min(2, n_j t)^{k_j}`; `Σ|a_k| ∏_j` of these
    /// dominates [`TailBound::at`].
    fn axis_factor(&self, j: usize, t: T) -> T {
        (T::of_usize(self.degree[j]) * t).min(T::of(2.0)).powi(self.k[j] as i32)
    }
}

/// Result of [`log_modulus_seminorm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Seminorm<T> {
    /// The truncated sum over `ν̄ ∈ [1, ν_max]^m`.
    pub value: T,
    /// Certified bound on `|full - value|`.
    pub tail: T,
    pub nu_max: usize,
}

impl<T: Real> Seminorm<T> {
    pub fn relative_tail(&self) -> T {
        if self.value == T::zero() {
            if self.tail == T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            self.tail / self.value
        }
    }
}

/// `{Σ_{ν̄∈[1,ν_max]^m} ∏ ν_j^{θ b_j} ω_k̄(f, 2^{-ν̄+1})^θ}^{1/θ}` from a
/// modulus grid, with the truncation tail certified by `bound`.
pub fn seminorm_from_grid<T: Real>(grid: &ModulusGrid<T>, bound: &TailBound<T>, sp: &SmoothParams<T>) -> Seminorm<T> {
    let m = grid.dim();
    let v = grid.nu_max;
    let w_max = v + TAIL_SHELLS;
    let theta = sp.theta;
    let sup = sp.is_sup();
    let weight = |nu: &[i64]| -> T {
        nu.iter().zip(&sp.b).fold(T::one(), |acc, (&n, &b)| {
            let e = if sup { b } else { theta * b };
            acc * T::of_i64(n).powf(e)
        })
    };
    let term = |w: T, om: T| -> T {
        if sup {
            w * om
        } else {
            w * om.powf(theta)
        }
    };
    let combine = |a: T, b: T| if sup { a.max(b) } else { a + b };

    let mut partial = T::zero();
    for nu in MultiRange::cube(m, 1, v as i64).iter() {
        let idx: Vec<usize> = nu.iter().map(|&x| x as usize).collect();
        partial = combine(partial, term(weight(&nu), grid.value(&idx)));
    }

    let mut near = T::zero();
    for nu in MultiRange::cube(m, 1, w_max as i64).iter() {
        if nu.iter().all(|&x| x as usize <= v) {
            continue;
        }
        let t: Vec<T> = nu.iter().map(|&x| dyadic_t::<T>(x as usize)).collect();
        near = combine(near, term(weight(&nu), bound.at(&t)));
    }

    let far = far_field(bound, sp, w_max);
    let tail_terms = combine(near, far);
    let (value, tail) = if sup {
        let total = partial.max(tail_terms);
        (partial, total - partial)
    } else {
        let value = partial.powf(T::one() / theta);
        (value, (partial + tail_terms).powf(T::one() / theta) - value)
    };
    Seminorm { value, tail, nu_max: v }
}

/// Bound for the terms with some `ν_j > w`.
fn far_field<T: Real>(bound: &TailBound<T>, sp: &SmoothParams<T>, w: usize) -> T {
    let m = bound.k.len();
    if bound.abs_sum == T::zero() {
        return T::zero();
    }
    let theta = sp.theta;
    if sp.is_sup() {
        let mut whole = Vec::with_capacity(m);
        let mut beyond = Vec::with_capacity(m);
        for j in 0..m {
            let b = sp.b[j];
            let g = |nu: usize| T::of_usize(nu).powf(b) * bound.axis_factor(j, dyadic_t(nu));
            let s = (1..=w + 1).fold(T::zero(), |acc, nu| acc.max(g(nu)));
            // ν^b 2^{-kν} decreases once b/ν < k ln 2
            if b / T::of_usize(w + 1) >= T::of_usize(bound.k[j] as usize) * T::LN_2() {
                return T::infinity();
            }
            whole.push(s);
            beyond.push(g(w + 1));
        }
        let mut worst = T::zero();
        for i in 0..m {
            let mut p = beyond[i];
            for j in 0..m {
                if j != i {
                    p = p * whole[j];
                }
            }
            worst = worst.max(p);
        }
        return bound.abs_sum * worst;
    }
    let mut head = Vec::with_capacity(m);
    let mut rest = Vec::with_capacity(m);
    for j in 0..m {
        let e = theta * sp.b[j];
        let g = |nu: usize| T::of_usize(nu).powf(e) * bound.axis_factor(j, dyadic_t(nu)).powf(theta);
        let h = (1..=w).fold(T::zero(), |acc, nu| acc + g(nu));
        let growth = (T::of_usize(w + 2) / T::of_usize(w + 1)).powf(e).max(T::one());
        let q = growth * T::of(2.0).powf(-theta * T::of_usize(bound.k[j] as usize));
        if q >= T::one() {
            return T::infinity();
        }
        head.push(h);
        rest.push(g(w + 1) / (T::one() - q));
    }
    let mut acc = T::zero();
    for e in 1u32..(1 << m) {
        let mut p = T::one();
        for j in 0..m {
            p = p * if e >> j & 1 == 1 { rest[j] } else { head[j] + rest[j] };
        }
        acc = acc + p;
    }
    bound.abs_sum.powf(theta) * acc
}

/// Starting truncation for automatic `ν_max`.
pub fn initial_nu_max(degree: &[usize]) -> usize {
    let n = degree.iter().copied().max().unwrap_or(0);
    bit_length(n as u64) as usize + 2
}

/// Grows `grid` until the certified relative tail is at most 1%, up to
/// [`NU_MAX_CAP`].
pub fn certified_seminorm<T: Real>(
    grid: &mut ModulusGrid<T>,
    bound: &TailBound<T>,
    sp: &SmoothParams<T>,
) -> Result<Seminorm<T>> {
    loop {
        let s = seminorm_from_grid(grid, bound, sp);
        if s.relative_tail() <= T::of(0.01) {
            return Ok(s);
        }
        if grid.nu_max() >= NU_MAX_CAP {
            return Err(Error::TailNotConverged {
                tail: s.tail.to_f64_lossy(),
                partial: s.value.to_f64_lossy(),
                nu_max: grid.nu_max(),
            });
        }
        let next = (grid.nu_max() + 2).min(NU_MAX_CAP);
        grid.extend_to(next)?;
    }
}

/// The modulus part of the `S^{0,b̄}_{p,τ,θ}𝐁` norm, discretized on the
/// dyadic `t`-grid. `nu_max = None` selects the smallest certified
/// truncation; an explicit `nu_max` fails with `TailNotConverged` when its
/// certified tail exceeds 1%.
pub fn log_modulus_seminorm<T: Real>(
    f: &TrigPoly<T>,
    sp: &SmoothParams<T>,
    lp: &LorentzParams<T>,
    nu_max: Option<usize>,
) -> Result<Seminorm<T>> {
    sp.validate()?;
    lp.validate()?;
    if sp.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: sp.dim() });
    }
    let norm = PolyNorm::new(&auto_grid(f.degree()), *lp)?;
    seminorm_on(f, sp, &norm, nu_max, DEFAULT_H_GRID)
}

/// [`log_modulus_seminorm`] on a caller-chosen grid and lattice density.
pub fn seminorm_on<T: Real>(
    f: &TrigPoly<T>,
    sp: &SmoothParams<T>,
    norm: &PolyNorm<T>,
    nu_max: Option<usize>,
    h_grid: usize,
) -> Result<Seminorm<T>> {
    if f.is_zero() {
        return Ok(Seminorm { value: T::zero(), tail: T::zero(), nu_max: nu_max.unwrap_or(1) });
    }
    let bound = TailBound::new(f, &sp.k, norm)?;
    let start = nu_max.unwrap_or_else(|| initial_nu_max(&f.effective_degree()));
    let mut grid = ModulusGrid::build(f, &sp.k, norm.clone(), start, h_grid)?;
    match nu_max {
        None => certified_seminorm(&mut grid, &bound, sp),
        Some(_) => {
            let s = seminorm_from_grid(&grid, &bound, sp);
            if s.relative_tail() > T::of(0.01) {
                return Err(Error::TailNotConverged {
                    tail: s.tail.to_f64_lossy(),
                    partial: s.value.to_f64_lossy(),
                    nu_max: grid.nu_max(),
                });
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lp(p: f64, tau: f64) -> LorentzParams<f64> {
        LorentzParams::new(p, tau).unwrap()
    }

    #[test]
    fn zero_step_gives_zero() {
        let f = TrigPoly::<f64>::cos_product(&[2, 3]);
        assert!(mixed_difference(&f, &[0.0, 0.0], &[1, 1]).is_zero());
    }

    #[test]
    fn cos_difference_at_pi() {
        let f = TrigPoly::<f64>::cos1(1);
        let d = mixed_difference(&f, &[PI], &[1]);
        let n = PolyNorm::new(&[1024], lp(2.0, 2.0)).unwrap().norm(&d).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn coefficient_difference_matches_pointwise_shift() {
        let f = &TrigPoly::<f64>::cos_product(&[3, 2]) + &TrigPoly::tensor_of(&[TrigPoly::sin1(1), TrigPoly::cos1(4)]);
        let h = [0.37, 1.21];
        let d = mixed_difference(&f, &h, &[2, 1]);
        for y in [[0.1, 0.2], [2.5, 4.0], [5.9, 0.0]] {
            let at = |a: f64, b: f64| f.eval_at(&[a, b]).re;
            // Δ_{h2} Δ_{h1}^2 by explicit shifts
            let second = |b: f64| at(y[0] + 2.0 * h[0], b) - 2.0 * at(y[0] + h[0], b) + at(y[0], b);
            let oracle = second(y[1] + h[1]) - second(y[1]);
            assert!((d.eval_at(&y).re - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn modulus_of_zero() {
        let f = TrigPoly::<f64>::zeros(&[3]);
        let w = mixed_modulus(&f, &[0.5], &[1], &lp(2.0, 2.0), 17).unwrap();
        assert_eq!(w.value, 0.0);
    }

    #[test]
    fn cos_modulus_at_pi() {
        let f = TrigPoly::<f64>::cos1(1);
        let w = mixed_modulus(&f, &[PI], &[1], &lp(2.0, 2.0), 17).unwrap();
        let dense = (0..=10_000).map(|i| 2f64.sqrt() * (PI * i as f64 / 10_000.0 / 2.0).sin()).fold(0.0, f64::max);
        assert!((w.value - dense).abs() < 1e-3);
        assert!((w.argmax[0] - PI).abs() < 1e-12);
    }

    #[test]
    fn tensor_cos_modulus_at_pi() {
        let f = TrigPoly::<f64>::cos_product(&[1, 1]);
        let w = mixed_modulus(&f, &[PI, PI], &[1, 1], &lp(2.0, 2.0), 17).unwrap();
        // Δ_π cos = -2 cos on each axis and ‖cos x cos y‖₂ = 1/2
        assert!((w.value - 2.0).abs() < 1e-2, "{}", w.value);
    }

    #[test]
    fn grid_values_are_monotone() {
        let f = &TrigPoly::<f64>::cos1(5) + &TrigPoly::sin1(2);
        let norm = PolyNorm::new(&[256], lp(3.0, 1.5)).unwrap();
        let g = ModulusGrid::build(&f, &[2], norm, 8, 17).unwrap();
        for nu in 1..8 {
            assert!(g.value(&[nu + 1]) <= g.value(&[nu]));
        }
    }

    #[test]
    fn grid_extension_reuses_memo() {
        let f = TrigPoly::<f64>::cos1(3);
        let norm = PolyNorm::new(&[64], lp(2.0, 2.0)).unwrap();
        let mut g = ModulusGrid::build(&f, &[1], norm.clone(), 4, 17).unwrap();
        let before = g.value(&[3]);
        g.extend_to(8).unwrap();
        let fresh = ModulusGrid::build(&f, &[1], norm, 8, 17).unwrap();
        assert_eq!(g.value(&[3]), fresh.value(&[3]));
        assert!(g.value(&[3]) >= before);
    }

    #[test]
    fn tail_bound_dominates_lattice_values() {
        let f = &TrigPoly::<f64>::cos_product(&[3, 5]) + &TrigPoly::cos_product(&[1, 2]);
        let norm = PolyNorm::new(&[64, 64], lp(2.0, 2.0)).unwrap();
        let g = ModulusGrid::build(&f, &[1, 1], norm.clone(), 5, 9).unwrap();
        let b = TailBound::new(&f, &[1, 1], &norm).unwrap();
        for (nu, t, w) in g.rows() {
            assert!(w <= b.at(&t) * (1.0 + 1e-12), "{nu:?}");
        }
    }

    #[test]
    fn seminorm_single_block_direct_sum() {
        let f = TrigPoly::<f64>::cos1(3);
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        let s = log_modulus_seminorm(&f, &sp, &lp(2.0, 2.0), None).unwrap();
        // direct oracle: Σ_ν ω(2^{-ν+1}) with many more terms
        let norm = PolyNorm::new(&[1024], lp(2.0, 2.0)).unwrap();
        let g = ModulusGrid::build(&f, &[1], norm, 2 * s.nu_max + 20, 17).unwrap();
        let direct: f64 = (1..=g.nu_max()).map(|nu| g.value(&[nu])).sum();
        assert!((s.value - direct).abs() <= s.tail + 1e-12);
        assert!(s.relative_tail() <= 0.01);
    }

    #[test]
    fn seminorm_homogeneous_and_zero() {
        let f = &TrigPoly::<f64>::cos1(3) + &TrigPoly::sin1(1);
        let sp = SmoothParams::new(2.0, vec![0.5], vec![1]).unwrap();
        let a = log_modulus_seminorm(&f, &sp, &lp(3.0, 1.5), Some(8)).unwrap();
        let b = log_modulus_seminorm(&f.scaled(-2.5), &sp, &lp(3.0, 1.5), Some(8)).unwrap();
        assert!((b.value - 2.5 * a.value).abs() <= 1e-12 * b.value);
        let z = log_modulus_seminorm(&TrigPoly::zeros(&[2]), &sp, &lp(3.0, 1.5), None).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn short_truncation_is_rejected() {
        let f = TrigPoly::<f64>::cos1(1);
        let sp = SmoothParams::new(1.0, vec![1.0], vec![1]).unwrap();
        assert!(matches!(
            log_modulus_seminorm(&f, &sp, &lp(2.0, 2.0), Some(1)),
            Err(Error::TailNotConverged { .. })
        ));
    }
}
