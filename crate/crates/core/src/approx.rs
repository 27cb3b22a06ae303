//! Jackson–Stechkin kernels, the kernel-based direct approximant and the
//! angle-approximation surrogate `Ỹ_l̄(f) = ‖f - U_l̄(f)‖_{p,τ}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::auto_grid;
use crate::lorentz::PolyNorm;
use crate::params::LorentzParams;
use crate::poly::TrigPoly;
use crate::scalar::Real;
use crate::spectral::angle_residual;

/// `F_l(u) = b_r (sin(ru/2)/sin(u/2))^{2k₀} = Σ_{|j|≤deg} φ_j e^{iju}`,
/// normalized to unit mass on `[-π, π]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacksonKernel<T> {
    pub l: usize,
    pub k: u32,
    pub k0: usize,
    pub r: usize,
    pub b_r: T,
    /// `φ_0, φ_1, …, φ_deg` (the kernel is even).
    pub coeffs: Vec<T>,
}

/// Builds `F_l` for difference order `k`.
///
/// `k₀ = ⌊(k+1)/2⌋ + 1` is the smallest integer above `(k+1)/2`, and
/// `r = ⌊l/(2k₀)⌋ + 1` is the upper end of `l/(2k₀) < r ≤ l/(2k₀) + 1`.
/// The coefficients are the `k₀`-fold self-convolution of the Fejér vector
/// `(r - |j|)_{|j|<r}`, so the degree is `k₀(r-1) ≤ l/2`. `l = 0` gives the
/// constant kernel `1/(2π)`.
pub fn jackson_kernel<T: Real>(l: usize, k: u32) -> Result<JacksonKernel<T>> {
    if k == 0 {
        return Err(Error::invalid("k", "smoothness order must be >= 1"));
    }
    let k0 = (k as usize + 1) / 2 + 1;
    let r = l / (2 * k0) + 1;
    // integer arithmetic keeps the raw coefficients exact as long as they fit
    let fejer: Vec<f64> = (0..2 * r - 1).map(|i| (r as f64) - (i as f64 - (r as f64 - 1.0)).abs()).collect();
    let mut raw = vec![1.0f64];
    for _ in 0..k0 {
        raw = convolve(&raw, &fejer);
    }
    let deg = (raw.len() - 1) / 2;
    let c0 = raw[deg];
    let two_pi = 2.0 * std::f64::consts::PI;
    let b_r = 1.0 / (two_pi * c0);
    let coeffs = raw[deg..].iter().map(|&c| T::of(c * b_r)).collect();
    Ok(JacksonKernel { l, k, k0, r, b_r: T::of(b_r), coeffs })
}

fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl<T: Real> JacksonKernel<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `φ_j`, zero beyond the degree.
    pub fn coeff(&self, j: i64) -> T {
        self.coeffs.get(j.unsigned_abs() as usize).copied().unwrap_or_else(T::zero)
    }

    /// `F̂(j) = ∫_{-π}^{π} F_l(u) e^{-iju} du = 2π φ_j`.
    pub fn transform(&self, j: i64) -> T {
        T::TAU() * self.coeff(j)
    }

    pub fn eval(&self, u: T) -> T {
        let mut acc = self.coeffs[0];
        for (j, &c) in self.coeffs.iter().enumerate().skip(1) {
            acc = acc + T::of(2.0) * c * (T::of_usize(j) * u).cos();
        }
        acc
    }

    /// The closed form `b_r (sin(ru/2)/sin(u/2))^{2k₀}` (limit `b_r r^{2k₀}` at 0).
    pub fn eval_closed_form(&self, u: T) -> T {
        let s = (u * T::of(0.5)).sin();
        let ratio = if s.abs() < T::of(1e-12) {
            T::of_usize(self.r)
        } else {
            (T::of_usize(self.r) * u * T::of(0.5)).sin() / s
        };
        self.b_r * ratio.powi(2 * self.k0 as i32)
    }

    /// `∫_{-π}^{π} F_l` by the periodic trapezoid rule on `n` nodes (exact
    /// once `n` exceeds the degree).
    pub fn mass_by_quadrature(&self, n: usize) -> T {
        let h = T::TAU() / T::of_usize(n);
        (0..n).fold(T::zero(), |s, i| s + self.eval_closed_form(-T::PI() + T::of_usize(i) * h)) * h
    }

    /// `b_r` recomputed by trapezoid quadrature of the unnormalized kernel.
    pub fn b_r_by_quadrature(&self) -> T {
        let n = 4 * self.degree() + 16;
        let raw = self.mass_by_quadrature(n) / self.b_r;
        T::one() / raw
    }

    /// `∫_{-π}^{π} F_l(u) |u|^μ du` by composite 8-point Gauss–Legendre.
    pub fn moment(&self, mu: T) -> T {
        let panels = 8 * self.degree() + 64;
        let width = T::PI() / T::of_usize(panels);
        let mut acc = T::zero();
        for p in 0..panels {
            let a = T::of_usize(p) * width;
            let mid = a + width * T::of(0.5);
            for (x, w) in GAUSS8 {
                let u = mid + T::of(x) * width * T::of(0.5);
                acc = acc + T::of(w) * self.eval(u) * u.powf(mu);
            }
        }
        // even kernel: twice the half-range integral
        acc * width
    }

    /// Per-axis multiplier of the one-variable approximant
    /// `(-1)^{k+1} ∫ F_l(t) Σ_{ν=1}^{k} (-1)^{k-ν} C(k,ν) f(x + νt) dt`
    /// at frequency `n`.
    pub fn approximant_multiplier(&self, n: i64) -> T {
        let k = self.k as i64;
        let mut acc = T::zero();
        let mut binom = T::one();
        for nu in 1..=k {
            binom = binom * T::of_i64(k - nu + 1) / T::of_i64(nu);
            let sign = if (k - nu) % 2 == 0 { T::one() } else { -T::one() };
            acc = acc + sign * binom * self.transform(n * nu);
        }
        if (k + 1) % 2 == 0 {
            acc
        } else {
            -acc
        }
    }
}

pub(crate) const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_27),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_361_96),
    (0.183_434_642_495_649_8, 0.362_683_783_378_361_96),
    (0.525_532_409_916_329, 0.313_706_645_877_887_27),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// The kernel-based angle approximant `A = f - ∏_j (I - T_{l_j}) f`.
///
/// Every factor is a Fourier multiplier, so the composition is computed
/// coefficientwise; `axis_order` fixes the order in which the residual
/// factors are multiplied (the default in the paper's construction is
/// `m, m-1, …, 1`).
pub fn direct_approximant<T: Real>(f: &TrigPoly<T>, l: &[usize], k: &[u32], axis_order: Option<&[usize]>) -> Result<TrigPoly<T>> {
    Ok(f - &direct_residual(f, l, k, axis_order)?)
}

/// `f - A`, with coefficients `a_k ∏_j (1 - M_j(k_j))`.
pub fn direct_residual<T: Real>(f: &TrigPoly<T>, l: &[usize], k: &[u32], axis_order: Option<&[usize]>) -> Result<TrigPoly<T>> {
    let m = f.dim();
    if l.len() != m || k.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: l.len().min(k.len()) });
    }
    f.require_ring_member()?;
    let default: Vec<usize> = (0..m).rev().collect();
    let order = axis_order.unwrap_or(&default);
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..m).collect::<Vec<_>>() {
        return Err(Error::invalid("axis_order", "must be a permutation of the axes"));
    }
    let mut residual = f.clone();
    for &j in order {
        let kernel = jackson_kernel::<T>(l[j], k[j])?;
        let factors: Vec<Vec<Complex<T>>> = (0..m)
            .map(|i| {
                let n = f.degree()[i] as i64;
                (-n..=n)
                    .map(|freq| {
                        if i == j {
                            Complex::new(T::one() - kernel.approximant_multiplier(freq), T::zero())
                        } else {
                            Complex::new(T::one(), T::zero())
                        }
                    })
                    .collect()
            })
            .collect();
        residual = residual.scale_separable(&factors);
    }
    Ok(residual)
}

/// `Ỹ_l̄(f) = ‖f - U_l̄(f)‖_{p,τ}` on the automatic grid.
pub fn angle_surrogate<T: Real>(f: &TrigPoly<T>, l: &[usize], lp: &LorentzParams<T>) -> Result<T> {
    let norm = PolyNorm::new(&auto_grid(f.degree()), *lp)?;
    angle_surrogate_on(f, l, &norm)
}

/// [`angle_surrogate`] on a caller-chosen grid.
pub fn angle_surrogate_on<T: Real>(f: &TrigPoly<T>, l: &[usize], norm: &PolyNorm<T>) -> Result<T> {
    f.require_ring_member()?;
    if l.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: l.len() });
    }
    norm.norm(&angle_residual(f, l))
}
