//! Trigonometric polynomials on the m-torus stored as dense coefficient
//! tensors over their degree box.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::GridEvaluator;
use crate::index::MultiRange;
use crate::lorentz::GridSample;
use crate::scalar::Real;

/// Default per-axis degree cap for polynomials read from user input.
pub const DEFAULT_DEGREE_CAP: usize = 128;

/// A finite trigonometric polynomial `f(y) = Σ a_k e^{i<k, y>}`, `y ∈ [0, 2π)^m`.
///
/// Coefficients live in a dense row-major tensor indexed by
/// `k ∈ ∏ [-n_j, n_j]` (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<T> {
    degree: Vec<usize>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> TrigPoly<T> {
    /// The zero polynomial with the given per-axis degree box.
    pub fn zeros(degree: &[usize]) -> Self {
        assert!(!degree.is_empty(), "dimension must be at least 1");
        let len = degree.iter().map(|n| 2 * n + 1).product();
        TrigPoly {
            degree: degree.to_vec(),
            coeffs: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn constant(dim: usize, c: T) -> Self {
        let mut p = Self::zeros(&vec![0; dim]);
        p.coeffs[0] = Complex::new(c, T::zero());
        p
    }

    /// Builds a polynomial from `(k, a_k)` pairs; the degree box is the
    /// smallest one containing every `k` (and at least `min_degree`).
    pub fn from_entries(dim: usize, min_degree: &[usize], entries: &[(Vec<i64>, Complex<T>)]) -> Result<Self> {
        if min_degree.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: min_degree.len() });
        }
        let mut degree = min_degree.to_vec();
        for (k, _) in entries {
            if k.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: k.len() });
            }
            for (d, kj) in degree.iter_mut().zip(k) {
                *d = (*d).max(kj.unsigned_abs() as usize);
            }
        }
        let mut p = Self::zeros(&degree);
        for (k, a) in entries {
            let off = p.offset(k);
            p.coeffs[off] = p.coeffs[off] + *a;
        }
        Ok(p)
    }

    /// `∏_j cos(a_j y_j)`.
    pub fn cos_product(freqs: &[i64]) -> Self {
        Self::tensor_of(freqs.iter().map(|&a| Self::cos1(a)).collect::<Vec<_>>().as_slice())
    }

    /// `cos(a y)` in one variable.
    pub fn cos1(a: i64) -> Self {
        let half = Complex::new(T::of(0.5), T::zero());
        let n = a.unsigned_abs() as usize;
        let mut p = Self::zeros(&[n]);
        if n == 0 {
            p.coeffs[0] = Complex::new(T::one(), T::zero());
        } else {
            p.coeffs[0] = half;
            p.coeffs[2 * n] = half;
        }
        p
    }

    /// `sin(a y)` in one variable.
    pub fn sin1(a: i64) -> Self {
        let n = a.unsigned_abs() as usize;
        let mut p = Self::zeros(&[n]);
        if n != 0 {
            let s = if a > 0 { T::one() } else { -T::one() };
            let h = T::of(0.5) * s;
            // sin(ay) = (e^{iay} - e^{-iay}) / 2i
            p.coeffs[2 * n] = Complex::new(T::zero(), -h);
            p.coeffs[0] = Complex::new(T::zero(), h);
        }
        p
    }

    /// Tensor product `∏_j g_j(y_j)` of one-variable polynomials.
    pub fn tensor_of(factors: &[TrigPoly<T>]) -> Self {
        assert!(!factors.is_empty());
        let mut out = factors[0].clone();
        for g in &factors[1..] {
            out = out.tensor(g);
        }
        out
    }

    /// Tensor product `f(y) g(z)` on the concatenated variables.
    pub fn tensor(&self, other: &TrigPoly<T>) -> Self {
        let mut degree = self.degree.clone();
        degree.extend_from_slice(&other.degree);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(*a * *b);
            }
        }
        TrigPoly { degree, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    /// Declared degree box `n̄`.
    pub fn degree(&self) -> &[usize] {
        &self.degree
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn box_range(&self) -> MultiRange {
        MultiRange::new(
            self.degree.iter().map(|&n| -(n as i64)).collect(),
            self.degree.iter().map(|&n| n as i64).collect(),
        )
    }

    #[inline]
    fn offset(&self, k: &[i64]) -> usize {
        let mut pos = 0usize;
        for (kj, &n) in k.iter().zip(&self.degree) {
            pos = pos * (2 * n + 1) + (kj + n as i64) as usize;
        }
        pos
    }

    /// Coefficient `a_k`, zero outside the degree box.
    pub fn coeff(&self, k: &[i64]) -> Complex<T> {
        assert_eq!(k.len(), self.dim());
        if k.iter().zip(&self.degree).any(|(kj, &n)| kj.unsigned_abs() as usize > n) {
            return Complex::new(T::zero(), T::zero());
        }
        self.coeffs[self.offset(k)]
    }

    /// Sets `a_k`; panics if `k` lies outside the degree box.
    pub fn set_coeff(&mut self, k: &[i64], value: Complex<T>) {
        assert!(
            k.iter().zip(&self.degree).all(|(kj, &n)| kj.unsigned_abs() as usize <= n),
            "frequency outside the degree box"
        );
        let off = self.offset(k);
        self.coeffs[off] = value;
    }

    /// Visits every `(k, a_k)` of the degree box in storage order.
    pub fn for_each_coeff(&self, mut visit: impl FnMut(&[i64], Complex<T>)) {
        let mut pos = 0;
        self.box_range().for_each(|k| {
            visit(k, self.coeffs[pos]);
            pos += 1;
        });
    }

    /// New polynomial with `a_k ↦ g(k, a_k)` on the same degree box.
    pub fn map_coeffs(&self, mut g: impl FnMut(&[i64], Complex<T>) -> Complex<T>) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        self.for_each_coeff(|k, a| coeffs.push(g(k, a)));
        TrigPoly { degree: self.degree.clone(), coeffs }
    }

    /// Keeps the coefficients selected by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        self.map_coeffs(|k, a| if keep(k) { a } else { zero })
    }

    /// Multiplies `a_k` by `∏_j factors[j][k_j + n_j]`.
    pub fn scale_separable(&self, factors: &[Vec<Complex<T>>]) -> Self {
        assert_eq!(factors.len(), self.dim());
        for (f, &n) in factors.iter().zip(&self.degree) {
            assert_eq!(f.len(), 2 * n + 1);
        }
        self.map_coeffs(|k, a| {
            let mut w = a;
            for (j, &kj) in k.iter().enumerate() {
                w = w * factors[j][(kj + self.degree[j] as i64) as usize];
            }
            w
        })
    }

    /// Same polynomial re-expressed on a different degree box; coefficients
    /// outside the new box are dropped.
    pub fn resized(&self, degree: &[usize]) -> Self {
        assert_eq!(degree.len(), self.dim());
        let mut out = Self::zeros(degree);
        let mut pos = 0;
        out.box_range().for_each(|k| {
            out.coeffs[pos] = self.coeff(k);
            pos += 1;
        });
        out
    }

    /// Largest `|k_j|` per axis carrying a nonzero coefficient.
    pub fn effective_degree(&self) -> Vec<usize> {
        let mut eff = vec![0usize; self.dim()];
        self.for_each_coeff(|k, a| {
            if !is_zero(a) {
                for (e, kj) in eff.iter_mut().zip(k) {
                    *e = (*e).max(kj.unsigned_abs() as usize);
                }
            }
        });
        eff
    }

    /// Shrinks the degree box to the effective degree.
    pub fn trimmed(&self) -> Self {
        let eff = self.effective_degree();
        if eff == self.degree {
            self.clone()
        } else {
            self.resized(&eff)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| is_zero(*a))
    }

    /// `Σ |a_k|`, an upper bound for the sup norm.
    pub fn abs_coeff_sum(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |s, a| s + a.norm())
    }

    /// `(Σ |a_k|²)^{1/2}`, the normalized L2 norm by Parseval.
    pub fn coeff_l2(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt()
    }

    /// Parseval norm of `Re f`, whose coefficients are `(a_k + conj(a_{-k}))/2`.
    pub fn real_part_l2(&self) -> T {
        let half = T::of(0.5);
        let mut acc = T::zero();
        let mut neg = vec![0i64; self.dim()];
        self.for_each_coeff(|k, a| {
            for (nj, kj) in neg.iter_mut().zip(k) {
                *nj = -kj;
            }
            acc = acc + ((a + self.coeffs[self.offset(&neg)].conj()) * half).norm_sqr();
        });
        acc.sqrt()
    }

    /// `max_k |a_{-k} - conj(a_k)|`; zero for real-valued polynomials.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        let mut neg = vec![0i64; self.dim()];
        self.for_each_coeff(|k, a| {
            for (nj, kj) in neg.iter_mut().zip(k) {
                *nj = -kj;
            }
            let d = (self.coeffs[self.offset(&neg)] - a.conj()).norm();
            if d > worst {
                worst = d;
            }
        });
        worst
    }

    /// Hermitian symmetry `a_{-k} = conj(a_k)` up to `tol · max |a_k|`.
    pub fn is_real(&self, tol: T) -> bool {
        let scale = self.coeffs.iter().fold(T::zero(), |m, a| m.max(a.norm()));
        self.hermitian_defect() <= tol * scale
    }

    /// First axis along which the function has nonzero mean, i.e. a
    /// nonzero coefficient with `k_j = 0`.
    pub fn nonzero_mean_axis(&self) -> Option<usize> {
        let mut found: Option<usize> = None;
        self.for_each_coeff(|k, a| {
            if is_zero(a) {
                return;
            }
            if let Some(j) = k.iter().position(|&kj| kj == 0) {
                found = Some(found.map_or(j, |f| f.min(j)));
            }
        });
        found
    }

    /// Membership in the class of functions with zero mean in every variable.
    pub fn is_ring_member(&self) -> bool {
        self.nonzero_mean_axis().is_none()
    }

    pub fn require_ring_member(&self) -> Result<()> {
        match self.nonzero_mean_axis() {
            None => Ok(()),
            Some(axis) => Err(Error::NotRingMember { axis }),
        }
    }

    pub fn check_degree_cap(&self, cap: usize) -> Result<()> {
        for (axis, &n) in self.degree.iter().enumerate() {
            if n > cap {
                return Err(Error::DegreeTooLarge { axis, degree: n, cap });
            }
        }
        Ok(())
    }

    /// Mixed derivative `∂^α f`: multiplies `a_k` by `∏ (i k_j)^{α_j}`.
    pub fn derivative(&self, alpha: &[u32]) -> Self {
        assert_eq!(alpha.len(), self.dim());
        let factors: Vec<Vec<Complex<T>>> = self
            .degree
            .iter()
            .zip(alpha)
            .map(|(&n, &a)| {
                (-(n as i64)..=n as i64)
                    .map(|k| Complex::new(T::zero(), T::of_i64(k)).powu(a))
                    .collect()
            })
            .collect();
        self.scale_separable(&factors)
    }

    /// Direct summation of `f(y)`, `y` in radians. Quadratic cost; meant for
    /// spot checks.
    pub fn eval_at(&self, y: &[T]) -> Complex<T> {
        assert_eq!(y.len(), self.dim());
        let mut acc = Complex::new(T::zero(), T::zero());
        self.for_each_coeff(|k, a| {
            if is_zero(a) {
                return;
            }
            let phase = k.iter().zip(y).fold(T::zero(), |s, (kj, yj)| s + T::of_i64(*kj) * *yj);
            acc = acc + a * Complex::new(phase.cos(), phase.sin());
        });
        acc
    }

    /// Samples `f(2π i/N)` on the uniform grid of the unit cube.
    pub fn evaluate_on_grid(&self, shape: &[usize]) -> Result<GridSample<T>> {
        GridEvaluator::new(shape)?.evaluate(self)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        let degree: Vec<usize> = self.degree.iter().zip(&other.degree).map(|(a, b)| *a.max(b)).collect();
        let mut out = Self::zeros(&degree);
        let mut pos = 0;
        out.box_range().for_each(|k| {
            out.coeffs[pos] = op(self.coeff(k), other.coeff(k));
            pos += 1;
        });
        out
    }

    pub fn scaled(&self, c: T) -> Self {
        TrigPoly {
            degree: self.degree.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }
}

#[inline]
fn is_zero<T: Real>(a: Complex<T>) -> bool {
    a.re == T::zero() && a.im == T::zero()
}

impl<T: Real> Add for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn add(self, rhs: &TrigPoly<T>) -> TrigPoly<T> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<T: Real> Sub for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn sub(self, rhs: &TrigPoly<T>) -> TrigPoly<T> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<T: Real> Neg for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn neg(self) -> TrigPoly<T> {
        self.scaled(-T::one())
    }
}

impl<T: Real> Mul<T> for &TrigPoly<T> {
    type Output = TrigPoly<T>;
    fn mul(self, c: T) -> TrigPoly<T> {
        self.scaled(c)
    }
}

/// JSON form `{dim, degree, entries: [[[k...], re, im], ...]}` listing the
/// nonzero coefficients in storage order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub dim: usize,
    pub degree: Vec<usize>,
    pub entries: Vec<(Vec<i64>, f64, f64)>,
}

impl<T: Real> TrigPoly<T> {
    pub fn to_json_value(&self) -> PolyJson {
        let mut entries = Vec::new();
        self.for_each_coeff(|k, a| {
            if !is_zero(a) {
                entries.push((k.to_vec(), a.re.to_f64_lossy(), a.im.to_f64_lossy()));
            }
        });
        PolyJson {
            dim: self.dim(),
            degree: self.degree.clone(),
            entries,
        }
    }

    pub fn from_json_value(json: &PolyJson) -> Result<Self> {
        if json.degree.len() != json.dim || json.dim == 0 {
            return Err(Error::DimensionMismatch { expected: json.dim, got: json.degree.len() });
        }
        let mut p = Self::zeros(&json.degree);
        for (k, re, im) in &json.entries {
            if k.len() != json.dim {
                return Err(Error::DimensionMismatch { expected: json.dim, got: k.len() });
            }
            if k.iter().zip(&json.degree).any(|(kj, &n)| kj.unsigned_abs() as usize > n) {
                return Err(Error::Parse(format!("entry {k:?} outside the declared degree box")));
            }
            p.set_coeff(k, Complex::new(T::of(*re), T::of(*im)));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let json: PolyJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&json)
    }
}

impl<T: Real> Serialize for TrigPoly<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for TrigPoly<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = PolyJson::deserialize(d)?;
        Self::from_json_value(&json).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cos_product_coefficients() {
        let f = TrigPoly::<f64>::cos_product(&[2, 3]);
        assert_eq!(f.degree(), &[2, 3]);
        assert_eq!(f.coeff(&[2, 3]).re, 0.25);
        assert_eq!(f.coeff(&[-2, 3]).re, 0.25);
        assert_eq!(f.coeff(&[2, -3]).re, 0.25);
        assert_eq!(f.coeff(&[0, 0]).re, 0.0);
        assert!(f.is_ring_member());
        assert!(f.is_real(0.0));
    }

    #[test]
    fn constant_is_not_ring_member() {
        let c = TrigPoly::<f64>::constant(2, 1.5);
        assert_eq!(c.nonzero_mean_axis(), Some(0));
        assert_eq!(c.require_ring_member(), Err(Error::NotRingMember { axis: 0 }));
        // cos(x) cos(0·y) = cos(x) has nonzero mean in y
        let g = TrigPoly::<f64>::cos_product(&[1, 0]);
        assert_eq!(g.nonzero_mean_axis(), Some(1));
    }

    #[test]
    fn sine_matches_pointwise() {
        let s = TrigPoly::<f64>::sin1(3);
        for i in 0..10 {
            let y = i as f64 * 0.37;
            let v = s.eval_at(&[y]);
            assert!((v.re - (3.0 * y).sin()).abs() < 1e-14);
            assert!(v.im.abs() < 1e-14);
        }
        assert!(s.is_real(0.0));
    }

    #[test]
    fn derivative_of_cos_is_minus_sin() {
        let f = TrigPoly::<f64>::cos1(2);
        let d = f.derivative(&[1]);
        for i in 0..7 {
            let y = i as f64 * 0.5;
            assert!((d.eval_at(&[y]).re + 2.0 * (2.0 * y).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let f = TrigPoly::<f64>::cos1(200);
        assert!(matches!(
            f.check_degree_cap(DEFAULT_DEGREE_CAP),
            Err(Error::DegreeTooLarge { axis: 0, degree: 200, cap: 128 })
        ));
        assert!(f.check_degree_cap(256).is_ok());
    }

    #[test]
    fn json_shape() {
        let f = TrigPoly::<f64>::cos1(1);
        let text = f.to_json();
        assert_eq!(text, r#"{"dim":1,"degree":[1],"entries":[[[-1],0.5,0.0],[[1],0.5,0.0]]}"#);
    }

    #[test]
    fn json_rejects_entries_outside_box() {
        let bad = r#"{"dim":1,"degree":[1],"entries":[[[3],1.0,0.0]]}"#;
        assert!(TrigPoly::<f64>::from_json(bad).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = TrigPoly<f64>> {
        (1usize..3, 0usize..4).prop_flat_map(|(dim, n)| {
            let len = (2 * n + 1).pow(dim as u32);
            proptest::collection::vec((-1e3f64..1e3, -1e3f64..1e3), len).prop_map(move |vals| {
                let mut p = TrigPoly::<f64>::zeros(&vec![n; dim]);
                for (c, (re, im)) in p.coeffs.iter_mut().zip(vals) {
                    *c = Complex::new(re, im);
                }
                p
            })
        })
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(p in arb_poly()) {
            let back = TrigPoly::<f64>::from_json(&p.to_json()).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn add_then_sub_restores(p in arb_poly(), c in -3.0f64..3.0) {
            let q = p.scaled(c);
            let r = &(&p + &q) - &q;
            for (a, b) in r.coeffs().iter().zip(p.coeffs()) {
                prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()));
            }
        }
    }
}
