//! Uniform-grid synthesis of trigonometric polynomials by inverse FFT.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::lorentz::GridSample;
use crate::poly::TrigPoly;
use crate::scalar::Real;

/// Per-dimension default grid sizes (m = 1, 2, 3).
pub fn default_grid(dim: usize) -> Vec<usize> {
    let n = match dim {
        1 => 1024,
        2 => 256,
        _ => 64,
    };
    vec![n; dim]
}

/// Smallest alias-free grid for a degree box.
pub fn min_grid(degree: &[usize]) -> Vec<usize> {
    degree.iter().map(|n| 2 * n + 1).collect()
}

/// The default grid, raised per axis to the next power of two that is
/// alias-free for `degree`.
pub fn auto_grid(degree: &[usize]) -> Vec<usize> {
    default_grid(degree.len())
        .into_iter()
        .zip(degree)
        .map(|(d, &n)| d.max((2 * n + 1).next_power_of_two()))
        .collect()
}

/// Planned inverse transforms for one grid shape; reusable across polynomials.
#[derive(Clone)]
pub struct GridEvaluator<T: Real> {
    shape: Vec<usize>,
    plans: Vec<Arc<dyn Fft<T>>>,
    scratch_len: usize,
}

impl<T: Real> std::fmt::Debug for GridEvaluator<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GridEvaluator").field("shape", &self.shape).finish()
    }
}

impl<T: Real> GridEvaluator<T> {
    pub fn new(shape: &[usize]) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::invalid("grid", "grid must have at least one axis"));
        }
        if let Some(axis) = shape.iter().position(|&n| n == 0) {
            return Err(Error::GridTooCoarse { axis, needed: 1, got: 0 });
        }
        let mut planner = FftPlanner::new();
        let plans: Vec<Arc<dyn Fft<T>>> = shape.iter().map(|&n| planner.plan_fft_inverse(n)).collect();
        let scratch_len = plans.iter().map(|p| p.get_inplace_scratch_len()).max().unwrap_or(0);
        Ok(GridEvaluator {
            shape: shape.to_vec(),
            plans,
            scratch_len,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check(&self, degree: &[usize]) -> Result<()> {
        if degree.len() != self.shape.len() {
            return Err(Error::DimensionMismatch {
                expected: self.shape.len(),
                got: degree.len(),
            });
        }
        for (axis, (&n, &size)) in degree.iter().zip(&self.shape).enumerate() {
            if size < 2 * n + 1 {
                return Err(Error::GridTooCoarse { axis, needed: 2 * n + 1, got: size });
            }
        }
        Ok(())
    }

    /// Complex samples `f(2π i/N)` in row-major order.
    pub fn evaluate_complex(&self, f: &TrigPoly<T>) -> Result<Vec<Complex<T>>> {
        self.check(f.degree())?;
        let m = self.shape.len();
        let zero = Complex::new(T::zero(), T::zero());
        let mut buf = vec![zero; self.len()];
        let strides = strides(&self.shape);

        f.for_each_coeff(|k, a| {
            if a == zero {
                return;
            }
            let mut off = 0;
            for j in 0..m {
                let nj = self.shape[j] as i64;
                off += (k[j].rem_euclid(nj)) as usize * strides[j];
            }
            buf[off] = a;
        });

        // Indices carrying data on axes that have not been transformed yet.
        let support: Vec<Vec<usize>> = f
            .degree()
            .iter()
            .zip(&self.shape)
            .map(|(&n, &size)| {
                let mut s: Vec<usize> = (0..=n).collect();
                s.extend((size - n)..size);
                s.dedup();
                s.retain(|&i| i < size);
                s
            })
            .collect();

        let mut scratch = vec![zero; self.scratch_len];
        let mut lane = vec![zero; *self.shape.iter().max().unwrap()];
        for axis in (0..m).rev() {
            let len = self.shape[axis];
            let stride = strides[axis];
            let choices: Vec<Vec<usize>> = (0..m)
                .map(|j| {
                    if j == axis {
                        vec![0]
                    } else if j < axis {
                        support[j].clone()
                    } else {
                        (0..self.shape[j]).collect()
                    }
                })
                .collect();
            for_each_combination(&choices, |idx| {
                let base: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                if stride == 1 {
                    self.plans[axis].process_with_scratch(&mut buf[base..base + len], &mut scratch);
                } else {
                    for (t, slot) in lane[..len].iter_mut().enumerate() {
                        *slot = buf[base + t * stride];
                    }
                    self.plans[axis].process_with_scratch(&mut lane[..len], &mut scratch);
                    for (t, v) in lane[..len].iter().enumerate() {
                        buf[base + t * stride] = *v;
                    }
                }
            });
        }
        Ok(buf)
    }

    /// Real samples (real part of the synthesis).
    pub fn evaluate(&self, f: &TrigPoly<T>) -> Result<GridSample<T>> {
        let values = self.evaluate_complex(f)?.into_iter().map(|c| c.re).collect();
        Ok(GridSample::new(self.shape.clone(), values))
    }

    /// Forward analysis: Fourier coefficients on the degree box `degree`
    /// from real samples (inverse of [`GridEvaluator::evaluate`] when the
    /// grid is alias-free).
    pub fn analyze(&self, samples: &GridSample<T>, degree: &[usize]) -> Result<TrigPoly<T>> {
        self.check(degree)?;
        let m = self.shape.len();
        let mut planner = FftPlanner::new();
        let mut buf: Vec<Complex<T>> = samples.values().iter().map(|&v| Complex::new(v, T::zero())).collect();
        let strides = strides(&self.shape);
        let mut lane = vec![Complex::new(T::zero(), T::zero()); *self.shape.iter().max().unwrap()];
        for axis in 0..m {
            let len = self.shape[axis];
            let plan = planner.plan_fft_forward(len);
            let choices: Vec<Vec<usize>> = (0..m)
                .map(|j| if j == axis { vec![0] } else { (0..self.shape[j]).collect() })
                .collect();
            for_each_combination(&choices, |idx| {
                let base: usize = idx.iter().zip(&strides).map(|(i, s)| i * s).sum();
                for (t, slot) in lane[..len].iter_mut().enumerate() {
                    *slot = buf[base + t * strides[axis]];
                }
                plan.process(&mut lane[..len]);
                for (t, v) in lane[..len].iter().enumerate() {
                    buf[base + t * strides[axis]] = *v;
                }
            });
        }
        let scale = T::one() / T::of_usize(self.len());
        let mut out = TrigPoly::zeros(degree);
        out.box_range().for_each(|k| {
            let mut off = 0;
            for j in 0..m {
                off += (k[j].rem_euclid(self.shape[j] as i64)) as usize * strides[j];
            }
            out.set_coeff(k, buf[off].scale(scale));
        });
        Ok(out)
    }
}

fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for j in (0..shape.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * shape[j + 1];
    }
    s
}

fn for_each_combination(choices: &[Vec<usize>], mut visit: impl FnMut(&[usize])) {
    if choices.iter().any(|c| c.is_empty()) {
        return;
    }
    let m = choices.len();
    let mut pos = vec![0usize; m];
    let mut idx: Vec<usize> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&idx);
        let mut axis = m;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if pos[axis] + 1 < choices[axis].len() {
                pos[axis] += 1;
                idx[axis] = choices[axis][pos[axis]];
                break;
            }
            pos[axis] = 0;
            idx[axis] = choices[axis][0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_samples() {
        let c = TrigPoly::<f64>::constant(2, 3.25);
        let g = c.evaluate_on_grid(&[5, 7]).unwrap();
        assert!(g.values().iter().all(|&v| v == 3.25));
    }

    #[test]
    fn cos_on_four_points() {
        let f = TrigPoly::<f64>::cos1(1);
        let g = f.evaluate_on_grid(&[4]).unwrap();
        let expect = [1.0, 0.0, -1.0, 0.0];
        for (v, e) in g.values().iter().zip(expect) {
            assert!((v - e).abs() < 1e-15, "{v} vs {e}");
        }
    }

    #[test]
    fn cos3_matches_direct_summation() {
        let f = TrigPoly::<f64>::cos1(3);
        let g = f.evaluate_on_grid(&[64]).unwrap();
        for (i, v) in g.values().iter().enumerate() {
            let direct = f.eval_at(&[2.0 * PI * i as f64 / 64.0]).re;
            assert!((v - direct).abs() < 1e-12);
            assert!((v - (3.0 * 2.0 * PI * i as f64 / 64.0).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn too_coarse_grid_is_rejected() {
        let f = TrigPoly::<f64>::cos1(3);
        assert_eq!(
            f.evaluate_on_grid(&[6]).unwrap_err(),
            Error::GridTooCoarse { axis: 0, needed: 7, got: 6 }
        );
        assert!(f.evaluate_on_grid(&[7]).is_ok());
    }

    #[test]
    fn mixed_2d_matches_direct_summation() {
        let mut f = TrigPoly::<f64>::zeros(&[2, 3]);
        let mut v = 0.1;
        f.box_range().iter().for_each(|k| {
            v += 0.37;
            f.set_coeff(&k, Complex::new((v * 3.1f64).sin(), (v * 1.7f64).cos()));
        });
        let ev = GridEvaluator::new(&[6, 9]).unwrap();
        let samples = ev.evaluate_complex(&f).unwrap();
        for i in 0..6 {
            for j in 0..9 {
                let y = [2.0 * PI * i as f64 / 6.0, 2.0 * PI * j as f64 / 9.0];
                let d = f.eval_at(&y);
                assert!((samples[i * 9 + j] - d).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn real_polynomial_has_no_imaginary_residue() {
        let f = &TrigPoly::<f64>::cos_product(&[3, 5]) + &TrigPoly::tensor_of(&[TrigPoly::sin1(2), TrigPoly::sin1(7)]);
        let ev = GridEvaluator::new(&[32, 32]).unwrap();
        let samples = ev.evaluate_complex(&f).unwrap();
        let residue = samples.iter().fold(0.0f64, |m, c| m.max(c.im.abs()));
        assert!(residue < 1e-10 * f.coeff_l2());
    }

    #[test]
    fn analysis_inverts_synthesis() {
        let f = &TrigPoly::<f64>::cos_product(&[3, 1]) + &TrigPoly::tensor_of(&[TrigPoly::sin1(2), TrigPoly::cos1(4)]);
        for shape in [[7usize, 9], [16, 16], [9, 12]] {
            let ev = GridEvaluator::new(&shape).unwrap();
            let back = ev.analyze(&ev.evaluate(&f).unwrap(), f.degree()).unwrap();
            for (a, b) in back.coeffs().iter().zip(f.coeffs()) {
                assert!((a - b).norm() <= 1e-10 * f.coeff_l2());
            }
        }
    }
}
