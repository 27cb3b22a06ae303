//! Lazily computed per-member quantities shared by every check.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::index::MultiRange;
use crate::lorentz::PolyNorm;
use crate::params::{BlockIndex, LorentzParams, SmoothParams};
use crate::poly::TrigPoly;
use crate::seqnorms::angle_table;
use crate::smoothness::{initial_nu_max, seminorm_from_grid, ModulusGrid, Seminorm, TailBound, NU_MAX_CAP};
use crate::spectral::{angle_residual, BlockGrid};

/// Everything the checks need about one member at one `(p, τ)`.
pub struct Profile {
    poly: TrigPoly<f64>,
    norm: PolyNorm<f64>,
    k: Vec<u32>,
    h_grid: usize,
    smooth: Vec<SmoothParams<f64>>,
    blocks: std::sync::Arc<OnceLock<Result<BlockGrid<f64>>>>,
    norm_f: OnceLock<Result<f64>>,
    block_norms: OnceLock<Result<Vec<(BlockIndex, f64)>>>,
    tails: OnceLock<Result<Vec<(BlockIndex, f64)>>>,
    square: OnceLock<Result<f64>>,
    angle: OnceLock<Result<Vec<(Vec<u32>, f64)>>>,
    residuals: OnceLock<Result<Vec<f64>>>,
    derivative: OnceLock<Result<f64>>,
    modulus: OnceLock<Result<ModulusState>>,
}

pub struct ModulusState {
    pub grid: ModulusGrid<f64>,
    pub seminorms: Vec<Seminorm<f64>>,
}

fn cached<'a, V>(cell: &'a OnceLock<Result<V>>, init: impl FnOnce() -> Result<V>) -> Result<&'a V> {
    cell.get_or_init(init).as_ref().map_err(Clone::clone)
}

fn same_sp(a: &SmoothParams<f64>, b: &SmoothParams<f64>) -> bool {
    a.theta.to_bits() == b.theta.to_bits() && a.b.len() == b.b.len() && a.b.iter().zip(&b.b).all(|(x, y)| x.to_bits() == y.to_bits())
}

impl Clone for ModulusState {
    fn clone(&self) -> Self {
        ModulusState { grid: self.grid.clone(), seminorms: self.seminorms.clone() }
    }
}

impl Profile {
    /// `smooth` lists every `(θ, b̄)` the run will ask for; the modulus grid
    /// is grown until all of them are certified so their values share one
    /// truncation.
    pub(crate) fn new(
        poly: &TrigPoly<f64>,
        shape: &[usize],
        lp: LorentzParams<f64>,
        k: u32,
        h_grid: usize,
        smooth: Vec<SmoothParams<f64>>,
        blocks: std::sync::Arc<OnceLock<Result<BlockGrid<f64>>>>,
    ) -> Result<Self> {
        Ok(Profile {
            poly: poly.clone(),
            norm: PolyNorm::new(shape, lp)?,
            k: vec![k; poly.dim()],
            h_grid,
            smooth,
            blocks,
            norm_f: OnceLock::new(),
            block_norms: OnceLock::new(),
            tails: OnceLock::new(),
            square: OnceLock::new(),
            angle: OnceLock::new(),
            residuals: OnceLock::new(),
            derivative: OnceLock::new(),
            modulus: OnceLock::new(),
        })
    }

    pub fn poly(&self) -> &TrigPoly<f64> {
        &self.poly
    }

    pub fn lp(&self) -> &LorentzParams<f64> {
        self.norm.params()
    }

    pub fn poly_norm(&self) -> &PolyNorm<f64> {
        &self.norm
    }

    pub fn k(&self) -> &[u32] {
        &self.k
    }

    pub fn h_grid(&self) -> usize {
        self.h_grid
    }

    fn block_grid(&self) -> Result<&BlockGrid<f64>> {
        cached(&self.blocks, || BlockGrid::new(&self.poly, self.norm.shape()))
    }

    /// `‖f‖_{p,τ}`.
    pub fn norm_f(&self) -> Result<f64> {
        cached(&self.norm_f, || self.norm.norm(&self.poly)).copied()
    }

    pub fn block_norms(&self) -> Result<&[(BlockIndex, f64)]> {
        cached(&self.block_norms, || Ok(self.block_grid()?.block_norms(self.lp()))).map(|v| v.as_slice())
    }

    /// Square-function tail norms from `ν̄ = 1̄`.
    pub fn tails(&self) -> Result<&[(BlockIndex, f64)]> {
        cached(&self.tails, || Ok(self.block_grid()?.tail_table(self.lp(), 1))).map(|v| v.as_slice())
    }

    /// `‖(Σ_s̄ |δ_s̄(f)|²)^{1/2}‖_{p,τ}`.
    pub fn square_norm(&self) -> Result<f64> {
        cached(&self.square, || Ok(self.block_grid()?.tail_norm(&BlockIndex(vec![0; self.poly.dim()]), self.lp()))).copied()
    }

    /// Theorem 3 needs the raw block samples.
    pub fn blocks(&self) -> Result<&BlockGrid<f64>> {
        self.block_grid()
    }

    /// `Ỹ` at dyadic cutoffs.
    pub fn angle(&self) -> Result<&[(Vec<u32>, f64)]> {
        cached(&self.angle, || angle_table(&self.poly, &self.norm, None)).map(|v| v.as_slice())
    }

    /// `Ỹ_l̄ = ‖f - (S_{l,∞} + S_{∞,l} - S_{l,l})f‖_{p,τ}` for `l̄ ∈ [0, n̄]^m`,
    /// row-major; zero once any `l_j ≥ n_j`.
    fn residual_table(&self) -> Result<&[f64]> {
        cached(&self.residuals, || {
            let n: Vec<i64> = self.poly.degree().iter().map(|&d| d as i64).collect();
            let cells: Vec<Vec<i64>> = MultiRange::new(vec![0; n.len()], n.clone()).iter().collect();
            cells
                .iter()
                .map(|l| {
                    if l.iter().zip(&n).any(|(a, b)| a >= b) {
                        return Ok(0.0);
                    }
                    let l: Vec<usize> = l.iter().map(|&x| x as usize).collect();
                    self.norm.norm(&angle_residual(&self.poly, &l))
                })
                .collect()
        })
        .map(|v| v.as_slice())
    }

    /// `Ỹ_l̄` at any cutoff.
    pub fn residual(&self, l: &[usize]) -> Result<f64> {
        let n = self.poly.degree();
        if l.iter().zip(n).any(|(a, b)| a >= b) {
            return Ok(0.0);
        }
        let table = self.residual_table()?;
        let off = l.iter().zip(n).fold(0, |o, (&x, &d)| o * (d + 1) + x);
        Ok(table[off])
    }

    /// `‖f^{(k̄)}‖_{p,τ}`.
    pub fn derivative_norm(&self) -> Result<f64> {
        cached(&self.derivative, || self.norm.norm(&self.poly.derivative(&self.k))).copied()
    }

    pub fn modulus(&self) -> Result<&ModulusState> {
        cached(&self.modulus, || {
            let bound = TailBound::new(&self.poly, &self.k, &self.norm)?;
            let mut nu = initial_nu_max(&self.poly.effective_degree());
            let mut grid = ModulusGrid::build(&self.poly, &self.k, self.norm.clone(), nu, self.h_grid)?;
            loop {
                let seminorms: Vec<Seminorm<f64>> = self.smooth.iter().map(|sp| seminorm_from_grid(&grid, &bound, sp)).collect();
                let worst = seminorms.iter().position(|s| s.relative_tail() > 0.01);
                match worst {
                    None => return Ok(ModulusState { grid, seminorms }),
                    Some(i) if nu >= NU_MAX_CAP => {
                        let s = seminorms[i];
                        return Err(Error::TailNotConverged { tail: s.tail, partial: s.value, nu_max: nu });
                    }
                    Some(_) => {
                        nu = (nu + 2).min(NU_MAX_CAP);
                        grid.extend_to(nu)?;
                    }
                }
            }
        })
    }

    /// Certified seminorm for one of the registered `(θ, b̄)`.
    pub fn seminorm(&self, sp: &SmoothParams<f64>) -> Result<f64> {
        let state = self.modulus()?;
        let i = self
            .smooth
            .iter()
            .position(|s| same_sp(s, sp))
            .ok_or_else(|| Error::invalid("sp", "smoothness parameters were not registered with the profile"))?;
        Ok(state.seminorms[i].value)
    }

    /// `‖f‖_{S^{0,b̄}_{p,τ,θ}𝐁}`.
    pub fn norm_bold_b(&self, sp: &SmoothParams<f64>) -> Result<f64> {
        Ok(self.norm_f()? + self.seminorm(sp)?)
    }
}
