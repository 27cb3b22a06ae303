//! Dyadic blocks `δ_s̄(f)`, rectangular partial sums, the angle operator
//! and Littlewood–Paley tail norms.

use std::collections::BTreeMap;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridEvaluator;
use crate::index::{bit_length, MultiRange};
use crate::lorentz::LorentzFunctional;
use crate::params::{BlockIndex, LorentzParams};
use crate::poly::TrigPoly;
use crate::scalar::Real;

/// Restriction of `f` to the dyadic block `ρ(s̄)`; the zero polynomial when
/// `s̄` has a zero component.
pub fn delta_block<T: Real>(f: &TrigPoly<T>, s: &BlockIndex) -> TrigPoly<T> {
    assert_eq!(s.dim(), f.dim(), "block index dimension");
    if s.is_empty_block() {
        return TrigPoly::zeros(&vec![0; f.dim()]);
    }
    // smallest box holding ρ(s̄) ∩ box(f)
    let degree: Vec<usize> = s
        .0
        .iter()
        .zip(f.degree())
        .map(|(&sj, &n)| ((1usize << sj) - 1).min(n))
        .collect();
    f.resized(&degree).filter(|k| s.contains(k))
}

/// Largest block index along each axis that can be nonzero: `bit_length(n_j)`.
pub fn max_block_index(degree: &[usize]) -> Vec<u32> {
    degree.iter().map(|&n| bit_length(n as u64)).collect()
}

/// All nonzero dyadic blocks of a polynomial, built in one pass.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition<T> {
    base: TrigPoly<T>,
    blocks: BTreeMap<BlockIndex, TrigPoly<T>>,
    max_index: Vec<u32>,
}

impl<T: Real> BlockDecomposition<T> {
    pub fn new(f: &TrigPoly<T>) -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        let mut entries: BTreeMap<BlockIndex, Vec<(Vec<i64>, Complex<T>)>> = BTreeMap::new();
        f.for_each_coeff(|k, a| {
            if a == zero {
                return;
            }
            if let Some(s) = BlockIndex::of_frequency(k) {
                entries.entry(s).or_default().push((k.to_vec(), a));
            }
        });
        let blocks = entries
            .into_iter()
            .map(|(s, e)| {
                let degree: Vec<usize> = s
                    .0
                    .iter()
                    .zip(f.degree())
                    .map(|(&sj, &n)| ((1usize << sj) - 1).min(n))
                    .collect();
                let poly = TrigPoly::from_entries(f.dim(), &degree, &e).expect("entries inside the block box");
                (s, poly)
            })
            .collect();
        BlockDecomposition {
            base: f.clone(),
            blocks,
            max_index: max_block_index(&f.effective_degree()),
        }
    }

    pub fn base(&self) -> &TrigPoly<T> {
        &self.base
    }

    /// Nonzero blocks in lexicographic order of `s̄`.
    pub fn blocks(&self) -> &BTreeMap<BlockIndex, TrigPoly<T>> {
        &self.blocks
    }

    pub fn max_index(&self) -> &[u32] {
        &self.max_index
    }

    pub fn get(&self, s: &BlockIndex) -> Option<&TrigPoly<T>> {
        self.blocks.get(s)
    }

    /// `Σ_s̄ δ_s̄(f)` on the degree box of the base polynomial.
    pub fn reassemble(&self) -> TrigPoly<T> {
        let mut out = TrigPoly::zeros(self.base.degree());
        for b in self.blocks.values() {
            b.for_each_coeff(|k, a| {
                let prev = out.coeff(k);
                out.set_coeff(k, prev + a);
            });
        }
        out
    }
}

/// Per-axis cutoff of a rectangular partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Finite(usize),
    Infinite,
}

impl Cutoff {
    #[inline]
    pub fn admits(self, k: i64) -> bool {
        match self {
            Cutoff::Finite(l) => k.unsigned_abs() as usize <= l,
            Cutoff::Infinite => true,
        }
    }
}

impl From<usize> for Cutoff {
    fn from(l: usize) -> Self {
        Cutoff::Finite(l)
    }
}

/// `S_l̄(f)`: keeps the coefficients with `|k_j| ≤ l_j` on every finite axis.
pub fn partial_sum<T: Real>(f: &TrigPoly<T>, l: &[Cutoff]) -> TrigPoly<T> {
    assert_eq!(l.len(), f.dim(), "cutoff dimension");
    f.filter(|k| k.iter().zip(l).all(|(&kj, c)| c.admits(kj)))
}

/// `U_l̄(f)`: the part of `f` with `|k_j| ≤ l_j` for at least one axis.
/// `f - U_l̄(f)` keeps exactly the frequencies beyond every cutoff.
pub fn angle_operator<T: Real>(f: &TrigPoly<T>, l: &[usize]) -> TrigPoly<T> {
    assert_eq!(l.len(), f.dim(), "cutoff dimension");
    f.filter(|k| k.iter().zip(l).any(|(&kj, &lj)| kj.unsigned_abs() as usize <= lj))
}

/// `f - U_l̄(f)`.
pub fn angle_residual<T: Real>(f: &TrigPoly<T>, l: &[usize]) -> TrigPoly<T> {
    assert_eq!(l.len(), f.dim(), "cutoff dimension");
    f.filter(|k| k.iter().zip(l).all(|(&kj, &lj)| kj.unsigned_abs() as usize > lj))
}

/// Reference form of `U_l̄`: the sum over nonempty `e ⊂ {1..m}` of the
/// restrictions to `G_l̄(e) = {k̄ : |k_j| ≤ l_j for j ∈ e, |k_j| > l_j otherwise}`.
/// One filter pass per subset; used to cross-check [`angle_operator`].
pub fn angle_operator_by_subsets<T: Real>(f: &TrigPoly<T>, l: &[usize]) -> TrigPoly<T> {
    let m = f.dim();
    assert_eq!(l.len(), m, "cutoff dimension");
    let mut out = TrigPoly::zeros(f.degree());
    for e in 1u32..(1 << m) {
        let part = f.filter(|k| {
            (0..m).all(|j| {
                let inside = k[j].unsigned_abs() as usize <= l[j];
                inside == (e >> j & 1 == 1)
            })
        });
        out = &out + &part;
    }
    out
}

/// Signed grid samples of every nonzero block of a polynomial on one common
/// grid; the cache behind tail norms and block sums.
#[derive(Debug, Clone)]
pub struct BlockGrid<T> {
    shape: Vec<usize>,
    dim: usize,
    max_index: Vec<u32>,
    samples: Vec<(BlockIndex, Vec<T>)>,
}

impl<T: Real> BlockGrid<T> {
    pub fn new(f: &TrigPoly<T>, shape: &[usize]) -> Result<Self> {
        Self::from_decomposition(&BlockDecomposition::new(f), shape)
    }

    pub fn from_decomposition(dec: &BlockDecomposition<T>, shape: &[usize]) -> Result<Self> {
        let ev = GridEvaluator::new(shape)?;
        ev.check(dec.base().degree())?;
        let blocks: Vec<(&BlockIndex, &TrigPoly<T>)> = dec.blocks().iter().collect();
        let samples = blocks
            .par_iter()
            .map(|(s, b)| Ok(((*s).clone(), ev.evaluate(b)?.into_values())))
            .collect::<Result<Vec<_>>>()?;
        Ok(BlockGrid {
            shape: shape.to_vec(),
            dim: dec.base().dim(),
            max_index: dec.max_index().to_vec(),
            samples,
        })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn max_index(&self) -> &[u32] {
        &self.max_index
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn block_indices(&self) -> impl Iterator<Item = &BlockIndex> {
        self.samples.iter().map(|(s, _)| s)
    }

    /// `‖δ_s̄(f)‖_{p,τ}` for every nonzero block, in lexicographic order.
    pub fn block_norms(&self, lp: &LorentzParams<T>) -> Vec<(BlockIndex, T)> {
        let fun = LorentzFunctional::new(*lp, self.len());
        self.samples
            .par_iter()
            .map(|(s, v)| (s.clone(), fun.norm_of(v)))
            .collect()
    }

    /// Samples of `Σ_{s̄ ∈ set} δ_s̄(f)`; summation in lexicographic block order.
    pub fn sum_where(&self, mut pick: impl FnMut(&BlockIndex) -> bool) -> Vec<T> {
        let mut acc = vec![T::zero(); self.len()];
        for (s, v) in &self.samples {
            if pick(s) {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = *a + *x;
                }
            }
        }
        acc
    }

    /// Pointwise square function `(Σ_{s̄ ≥ ν̄} |δ_s̄(f)|²)^{1/2}`.
    pub fn square_function(&self, nu: &BlockIndex) -> Vec<T> {
        let mut acc = vec![T::zero(); self.len()];
        for (s, v) in &self.samples {
            if s.dominates(nu) {
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = *a + *x * *x;
                }
            }
        }
        acc.into_iter().map(|a| a.sqrt()).collect()
    }

    pub fn tail_norm(&self, nu: &BlockIndex, lp: &LorentzParams<T>) -> T {
        LorentzFunctional::new(*lp, self.len()).norm_of(&self.square_function(nu))
    }

    /// Tail norms for every `ν̄ ∈ [start, s̄max]^m` in row-major order.
    pub fn tail_table(&self, lp: &LorentzParams<T>, start: u32) -> Vec<(BlockIndex, T)> {
        let fun = LorentzFunctional::new(*lp, self.len());
        let lo: Vec<i64> = vec![start as i64; self.dim];
        let hi: Vec<i64> = self.max_index.iter().map(|&s| s as i64).collect();
        let nus: Vec<BlockIndex> = MultiRange::new(lo, hi)
            .iter()
            .map(|v| BlockIndex(v.into_iter().map(|x| x as u32).collect()))
            .collect();
        nus.into_par_iter()
            .map(|nu| {
                let v = fun.norm_of(&self.square_function(&nu));
                (nu, v)
            })
            .collect()
    }
}

/// `‖(Σ_{s̄ ≥ ν̄} |δ_s̄(f)|²)^{1/2}‖_{p,τ}` on the given grid.
pub fn lp_tail_norm<T: Real>(f: &TrigPoly<T>, nu: &BlockIndex, lp: &LorentzParams<T>, shape: &[usize]) -> Result<T> {
    f.require_ring_member()?;
    lp.validate()?;
    if nu.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: nu.dim() });
    }
    if nu.0.iter().any(|&v| v == 0) {
        return Err(Error::invalid("nu", "tail start must be at least 1 on every axis"));
    }
    Ok(BlockGrid::new(f, shape)?.tail_norm(nu, lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(p: f64, tau: f64) -> LorentzParams<f64> {
        LorentzParams::new(p, tau).unwrap()
    }

    #[test]
    fn cos3_lives_in_block_two() {
        let f = TrigPoly::<f64>::cos1(3);
        assert_eq!(delta_block(&f, &BlockIndex(vec![2])).trimmed(), f);
        assert!(delta_block(&f, &BlockIndex(vec![1])).is_zero());
        assert!(delta_block(&f, &BlockIndex(vec![0])).is_zero());
    }

    #[test]
    fn partial_sum_examples() {
        let f = TrigPoly::<f64>::cos_product(&[2, 2]);
        assert_eq!(partial_sum(&f, &[Cutoff::Finite(2), Cutoff::Finite(2)]), f);
        assert!(partial_sum(&f, &[Cutoff::Finite(1), Cutoff::Infinite]).is_zero());
    }

    #[test]
    fn angle_examples() {
        let f = TrigPoly::<f64>::cos_product(&[1, 1]);
        assert_eq!(angle_operator(&f, &[1, 1]), f);
        assert!(angle_residual(&f, &[1, 1]).is_zero());
        let g = TrigPoly::<f64>::cos_product(&[2, 2]);
        assert!(angle_operator(&g, &[1, 1]).is_zero());
        assert_eq!(angle_operator_by_subsets(&g, &[1, 1]), angle_operator(&g, &[1, 1]));
    }

    #[test]
    fn empty_tail_is_zero() {
        let f = TrigPoly::<f64>::cos1(3);
        let v = lp_tail_norm(&f, &BlockIndex(vec![3]), &lp(2.0, 2.0), &[64]).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn two_block_tail_by_orthogonality() {
        let f = &TrigPoly::<f64>::cos1(1) + &TrigPoly::cos1(3);
        let v = lp_tail_norm(&f, &BlockIndex(vec![1]), &lp(2.0, 2.0), &[1024]).unwrap();
        assert!((v - 1.0).abs() < 1e-3);
    }

    #[test]
    fn single_block_tail_is_the_norm() {
        let f = TrigPoly::<f64>::cos1(5);
        let n = crate::lorentz::PolyNorm::new(&[1024], lp(3.0, 1.5)).unwrap().norm(&f).unwrap();
        for nu in 1..=3 {
            let v = lp_tail_norm(&f, &BlockIndex(vec![nu]), &lp(3.0, 1.5), &[1024]).unwrap();
            assert!((v - n).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_requires_ring_member() {
        let f = TrigPoly::<f64>::constant(1, 1.0);
        assert!(matches!(
            lp_tail_norm(&f, &BlockIndex(vec![1]), &lp(2.0, 2.0), &[8]),
            Err(Error::NotRingMember { axis: 0 })
        ));
    }
}
