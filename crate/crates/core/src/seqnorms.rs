//! Discrete norms of the function classes: the block sequence norm, the
//! `𝐁` norm, the right-hand sides of the equivalence theorems, the embedding
//! exponents and the parameter-embedding series conditions.

use serde::{Deserialize, Serialize};

use crate::approx::angle_surrogate_on;
use crate::error::{Error, Result};
use crate::grid::auto_grid;
use crate::index::{bit_length, MultiRange};
use crate::lorentz::{LorentzFunctional, PolyNorm};
use crate::params::{BlockIndex, LorentzParams, SmoothParams};
use crate::poly::TrigPoly;
use crate::scalar::Real;
use crate::smoothness::{seminorm_on, DEFAULT_H_GRID};
use crate::spectral::BlockGrid;

/// `{Σ_s̄ w(s̄)^θ ‖δ_s̄‖^θ}^{1/θ}` (sup for `θ = ∞`) for arbitrary positive
/// per-index weights `w`.
fn weighted_sum<T: Real, I>(terms: I, theta: T) -> T
where
    I: IntoIterator<Item = (T, T)>,
{
    if theta.is_infinite() {
        terms.into_iter().fold(T::zero(), |m, (w, v)| m.max(w * v))
    } else {
        let s = terms.into_iter().fold(T::zero(), |s, (w, v)| s + (w * v).powf(theta));
        s.powf(T::one() / theta)
    }
}

/// `∏ (s_j+1)^{b_j}`, optionally times `2^{<s̄, r̄>}`.
fn block_weight<T: Real>(s: &[u32], b: &[T], r: Option<&[T]>) -> T {
    let mut w = T::one();
    for (j, (&sj, &bj)) in s.iter().zip(b).enumerate() {
        w = w * T::of_usize(sj as usize + 1).powf(bj);
        if let Some(r) = r {
            w = w * T::of(2.0).powf(T::of_usize(sj as usize) * r[j]);
        }
    }
    w
}

/// Sequence norm from precomputed block norms.
pub fn seq_norm_from_blocks<T: Real>(blocks: &[(BlockIndex, T)], sp: &SmoothParams<T>, r_weights: Option<&[T]>) -> T {
    weighted_sum(blocks.iter().map(|(s, v)| (block_weight(&s.0, &sp.b, r_weights), *v)), sp.theta)
}

/// `‖f‖_{S^{0,b̄}_{p,τ,θ}B} = {Σ_s̄ ∏(s_j+1)^{b_jθ} ‖δ_s̄(f)‖_{p,τ}^θ}^{1/θ}`.
pub fn seq_norm_b<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, r_weights: Option<&[T]>) -> Result<T> {
    check_inputs(f, lp, sp)?;
    if let Some(r) = r_weights {
        if r.len() != f.dim() {
            return Err(Error::DimensionMismatch { expected: f.dim(), got: r.len() });
        }
    }
    let bg = BlockGrid::new(f, &auto_grid(f.degree()))?;
    Ok(seq_norm_from_blocks(&bg.block_norms(lp), sp, r_weights))
}

fn check_inputs<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>) -> Result<()> {
    lp.validate()?;
    sp.validate()?;
    if sp.dim() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: sp.dim() });
    }
    f.require_ring_member()
}

/// `‖f‖_{p,τ} + ` the certified log-modulus seminorm.
pub fn norm_bold_b<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, nu_max: Option<usize>) -> Result<T> {
    check_inputs(f, lp, sp)?;
    let norm = PolyNorm::new(&auto_grid(f.degree()), *lp)?;
    let s = seminorm_on(f, sp, &norm, nu_max, DEFAULT_H_GRID)?;
    Ok(norm.norm(f)? + s.value)
}

/// `[2^{ν-1}]`: 0 for `ν = 0`, else `2^{ν-1}`.
pub fn dyadic_cutoff(nu: u32) -> usize {
    if nu == 0 {
        0
    } else {
        1usize << (nu - 1)
    }
}

/// Largest `ν` with `[2^{ν-1}] < n`, i.e. the last cutoff at which `Ỹ` can
/// be nonzero on an axis of degree `n ≥ 1`.
pub fn last_live_cutoff(n: usize) -> u32 {
    bit_length(n.saturating_sub(1) as u64)
}

/// `Ỹ_{[2^{ν̄-1}]}(f)` for every `ν̄ ∈ ∏[0, last_live_cutoff(n_j)]`, capped
/// at `nu_max`, in row-major order.
pub fn angle_table<T: Real>(f: &TrigPoly<T>, norm: &PolyNorm<T>, nu_max: Option<u32>) -> Result<Vec<(Vec<u32>, T)>> {
    let deg = f.effective_degree();
    let hi: Vec<i64> = deg
        .iter()
        .map(|&n| {
            let v = last_live_cutoff(n) as i64;
            nu_max.map_or(v, |c| v.min(c as i64))
        })
        .collect();
    if f.is_zero() {
        return Ok(Vec::new());
    }
    let cells: Vec<Vec<u32>> = MultiRange::new(vec![0; f.dim()], hi)
        .iter()
        .map(|v| v.into_iter().map(|x| x as u32).collect())
        .collect();
    use rayon::prelude::*;
    cells
        .into_par_iter()
        .map(|nu| {
            let l: Vec<usize> = nu.iter().map(|&v| dyadic_cutoff(v)).collect();
            Ok((nu, angle_surrogate_on(f, &l, norm)?))
        })
        .collect()
}

/// `{Σ_{ν̄ ≥ start} ∏(ν_j+1)^{θb_j} Ỹ_{[2^{ν̄-1}]}^θ}^{1/θ}` from a table.
pub fn theorem1_from_table<T: Real>(table: &[(Vec<u32>, T)], sp: &SmoothParams<T>, start: u32) -> T {
    weighted_sum(
        table
            .iter()
            .filter(|(nu, _)| nu.iter().all(|&v| v >= start))
            .map(|(nu, y)| (block_weight(nu, &sp.b, None), *y)),
        sp.theta,
    )
}

/// Right-hand side of the first equivalence: the weighted `ℓ_θ` sum of
/// angle approximations at dyadic cutoffs, `ν̄` starting at `0̄`.
pub fn theorem1_rhs<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, nu_max: Option<u32>) -> Result<T> {
    check_inputs(f, lp, sp)?;
    let norm = PolyNorm::new(&auto_grid(f.degree()), *lp)?;
    Ok(theorem1_from_table(&angle_table(f, &norm, nu_max)?, sp, 0))
}

/// `‖f‖ + {Σ_{ν̄} ∏(ν_j+1)^{θb_j} ‖tail_ν̄‖^θ}^{1/θ}` from a tail table.
pub fn theorem2_from_tails<T: Real>(norm_f: T, tails: &[(BlockIndex, T)], sp: &SmoothParams<T>) -> T {
    norm_f + weighted_sum(tails.iter().map(|(nu, v)| (block_weight(&nu.0, &sp.b, None), *v)), sp.theta)
}

/// Right-hand side of the square-function equivalence with tails from
/// `ν̄ = start·1̄` (the theorem's sums start at 1).
pub fn theorem2_rhs_from<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, start: u32) -> Result<T> {
    check_inputs(f, lp, sp)?;
    if start == 0 {
        return Err(Error::invalid("start", "square-function tails start at 1"));
    }
    let shape = auto_grid(f.degree());
    let bg = BlockGrid::new(f, &shape)?;
    let norm_f = PolyNorm::new(&shape, *lp)?.norm(f)?;
    Ok(theorem2_from_tails(norm_f, &bg.tail_table(lp, start), sp))
}

pub fn theorem2_rhs<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>) -> Result<T> {
    theorem2_rhs_from(f, lp, sp, 1)
}

/// Which display of the dyadic-of-dyadic theorem: the lower bound sums
/// `l̄ ≥ 1̄`, the upper bound `l̄ ≥ 0̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Group `l` of block index `s ≥ 1`: `s ∈ [[2^{l-1}]+1, 2^l]`.
pub fn group_of(s: u32) -> u32 {
    assert!(s >= 1, "block indices start at 1");
    bit_length((s - 1) as u64)
}

/// Inclusive range of block indices in group `l`.
pub fn group_range(l: u32) -> (u32, u32) {
    (dyadic_cutoff(l) as u32 + 1, 1u32 << l)
}

/// Dyadic-of-dyadic norm from cached block samples.
pub fn theorem3_from_grid<T: Real>(norm_f: T, bg: &BlockGrid<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, side: Side) -> T {
    let m = sp.dim();
    let start = match side {
        Side::Lower => 1,
        Side::Upper => 0,
    };
    let hi: Vec<i64> = bg.max_index().iter().map(|&s| if s == 0 { -1 } else { group_of(s) as i64 }).collect();
    if hi.iter().any(|&h| h < start) {
        return norm_f;
    }
    let fun = LorentzFunctional::new(*lp, bg.len());
    let inv_theta = if sp.is_sup() { T::zero() } else { T::one() / sp.theta };
    let terms: Vec<(T, T)> = MultiRange::new(vec![start; m], hi)
        .iter()
        .map(|l| {
            let samples = bg.sum_where(|s| s.0.iter().zip(&l).all(|(&sj, &lj)| group_of(sj) as i64 == lj));
            let w = l
                .iter()
                .zip(&sp.b)
                .fold(T::one(), |acc, (&lj, &bj)| acc * T::of(2.0).powf(T::of_i64(lj) * (bj + inv_theta)));
            (w, fun.norm_of(&samples))
        })
        .collect();
    norm_f + weighted_sum(terms, sp.theta)
}

/// `‖f‖_{p,τ} + {Σ_l̄ ∏ 2^{l_jθ(b_j+1/θ)} ‖Σ_{s̄ in group l̄} δ_s̄(f)‖^θ}^{1/θ}`.
pub fn theorem3_norm<T: Real>(f: &TrigPoly<T>, lp: &LorentzParams<T>, sp: &SmoothParams<T>, side: Side) -> Result<T> {
    check_inputs(f, lp, sp)?;
    let shape = auto_grid(f.degree());
    let bg = BlockGrid::new(f, &shape)?;
    let norm_f = PolyNorm::new(&shape, *lp)?.norm(f)?;
    Ok(theorem3_from_grid(norm_f, &bg, lp, sp, side))
}

/// Exponents of the embeddings between the `𝐁` and `B` scales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingExponents<T> {
    /// NaN when `covered` is false.
    pub beta: T,
    pub gamma: T,
    pub v: Vec<T>,
    pub u: Vec<T>,
    pub covered: bool,
}

/// `β = τ, γ = 2` for `1 < τ ≤ 2`; `β = 2, γ = τ` for `τ > 2, p > 2`;
/// anything else is outside the case table.
pub fn embedding_exponents<T: Real>(lp: &LorentzParams<T>, sp: &SmoothParams<T>) -> Result<EmbeddingExponents<T>> {
    lp.validate()?;
    sp.validate()?;
    let two = T::of(2.0);
    let case = if lp.tau > T::one() && lp.tau <= two {
        Some((lp.tau, two))
    } else if lp.tau > two && lp.p > two {
        Some((two, lp.tau))
    } else {
        None
    };
    let recip = |x: T| if x.is_infinite() { T::zero() } else { T::one() / x };
    Ok(match case {
        Some((beta, gamma)) => EmbeddingExponents {
            beta,
            gamma,
            v: sp.b.iter().map(|&b| b + recip(beta.min(sp.theta))).collect(),
            u: sp.b.iter().map(|&b| b + recip(gamma.max(sp.theta))).collect(),
            covered: true,
        },
        None => EmbeddingExponents {
            beta: T::nan(),
            gamma: T::nan(),
            v: vec![T::nan(); sp.dim()],
            u: vec![T::nan(); sp.dim()],
            covered: false,
        },
    })
}

/// Verdict of a numeric convergence test for a positive multiple series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict<T> {
    pub converges: bool,
    pub partial_sum: T,
    /// Geometric estimate of the remainder (infinite when divergent).
    pub tail_estimate: T,
    /// Ratios of consecutive shell sums.
    pub ratios: Vec<T>,
    /// Convergence decided from the exponents in closed form.
    pub analytic: bool,
}

const CONVERGE_RATIO: f64 = 0.95;

fn eta_prime<T: Real>(theta1: T, theta2: T) -> Result<T> {
    if !(theta2 > T::zero()) || !(theta2 < theta1) {
        return Err(Error::invalid("theta", "need 0 < theta2 < theta1"));
    }
    if theta1.is_infinite() {
        return Ok(T::one());
    }
    let eta = theta1 / theta2;
    Ok(eta / (eta - T::one()))
}

fn check_series_args<T: Real>(b1: &[T], b2: &[T], tau1: T, tau2: T) -> Result<()> {
    if b1.len() != b2.len() || b1.is_empty() {
        return Err(Error::DimensionMismatch { expected: b1.len(), got: b2.len() });
    }
    if !(tau2 > T::one() && tau2 < tau1 && tau1.is_finite()) {
        return Err(Error::invalid("tau", "need 1 < tau2 < tau1 < inf"));
    }
    Ok(())
}

/// Closed-form verdict for `Σ_{s̄≥1̄} ∏ s_j^{a_j} (Σ_j (s_j+1))^c`: converges
/// iff `Σ_{j∈E} (a_j+1) + c < 0` for every nonempty `E`.
pub fn power_series_converges<T: Real>(a: &[T], c: T) -> bool {
    let m = a.len();
    (1u32..(1 << m)).all(|e| {
        let s = (0..m).filter(|j| e >> j & 1 == 1).fold(c, |s, j| s + a[j] + T::one());
        s < T::zero()
    })
}

/// Closed-form verdict for `Σ_{l̄≥0̄} ∏ 2^{l_j e_j} (Σ_j 2^{l_j})^c`:
/// converges iff `Σ_{j∈E} e_j + c < 0` for every nonempty `E`.
pub fn geometric_series_converges<T: Real>(e: &[T], c: T) -> bool {
    let m = e.len();
    (1u32..(1 << m)).all(|mask| (0..m).filter(|j| mask >> j & 1 == 1).fold(c, |s, j| s + e[j]) < T::zero())
}

fn verdict_from_shells<T: Real>(shells: Vec<T>, truncation: usize, analytic: bool) -> Result<SeriesVerdict<T>> {
    let partial_sum = shells.iter().fold(T::zero(), |s, &d| s + d);
    let ratios: Vec<T> = shells.windows(2).map(|w| w[1] / w[0]).collect();
    if ratios.len() < 3 {
        return Err(Error::Inconclusive { truncation, detail: "fewer than four shells".into() });
    }
    let last = &ratios[ratios.len() - 3..];
    let worst = last.iter().fold(T::zero(), |m, &r| m.max(r));
    if last.iter().all(|&r| r < T::of(CONVERGE_RATIO)) {
        let tail_estimate = *shells.last().unwrap() * worst / (T::one() - worst);
        Ok(SeriesVerdict { converges: true, partial_sum, tail_estimate, ratios, analytic })
    } else if last.iter().all(|&r| r >= T::one()) {
        Ok(SeriesVerdict { converges: false, partial_sum, tail_estimate: T::infinity(), ratios, analytic })
    } else {
        Err(Error::Inconclusive {
            truncation,
            detail: format!("last shell ratios {:?} neither all < {CONVERGE_RATIO} nor all >= 1", last.iter().map(|r| r.to_f64_lossy()).collect::<Vec<_>>()),
        })
    }
}

/// Exponents `(a_j, c)` of condition (2.33).
pub fn theorem5_exponents<T: Real>(b1: &[T], b2: &[T], tau1: T, tau2: T, theta1: T, theta2: T) -> Result<(Vec<T>, T)> {
    check_series_args(b1, b2, tau1, tau2)?;
    let ep = eta_prime(theta1, theta2)?;
    let a = b1.iter().zip(b2).map(|(&x, &y)| (y - x) * theta2 * ep).collect();
    let c = (T::one() / tau2 - T::one() / tau1) * theta2 * ep;
    Ok((a, c))
}

/// Numeric convergence test of
/// `Σ_{s̄} ∏ s_j^{(b²_j-b¹_j)θ₂η'} (Σ_j (s_j+1))^{(1/τ₂-1/τ₁)θ₂η'}`
/// with `η = θ₁/θ₂`, `η' = η/(η-1)` (`η' = 1` for `θ₁ = ∞`).
///
/// Terms with `max s_j ≤ truncation` are summed in dyadic shells
/// `2^q ≤ max s_j < 2^{q+1}`. The series is declared convergent when the last
/// three shell ratios are below 0.95, divergent when they are all at least 1,
/// and `Inconclusive` otherwise.
pub fn theorem5_condition<T: Real>(b1: &[T], b2: &[T], tau1: T, tau2: T, theta1: T, theta2: T, truncation: usize) -> Result<SeriesVerdict<T>> {
    let (a, c) = theorem5_exponents(b1, b2, tau1, tau2, theta1, theta2)?;
    let analytic = power_series_converges(&a, c);
    let m = a.len();
    let q_max = bit_length(truncation as u64) as usize;
    let n = (1usize << q_max) - 1;
    let pows: Vec<Vec<T>> = a.iter().map(|&aj| (0..=n).map(|s| T::of_usize(s).powf(aj)).collect()).collect();
    let mut shells = vec![T::zero(); q_max];
    for s in MultiRange::cube(m, 1, n as i64).iter() {
        let top = *s.iter().max().unwrap() as u64;
        let q = bit_length(top) as usize - 1;
        let mut w = T::one();
        let mut total = 0usize;
        for (j, &sj) in s.iter().enumerate() {
            w = w * pows[j][sj as usize];
            total += sj as usize + 1;
        }
        shells[q] = shells[q] + w * T::of_usize(total).powf(c);
    }
    verdict_from_shells(shells, truncation, analytic)
}

/// Exponents `(e_j, c)` of the condition in the third embedding.
pub fn theorem5_3_exponents<T: Real>(b1: &[T], b2: &[T], tau1: T, tau2: T, theta1: T, theta2: T) -> Result<(Vec<T>, T)> {
    check_series_args(b1, b2, tau1, tau2)?;
    let ep = eta_prime(theta1, theta2)?;
    let inv1 = if theta1.is_infinite() { T::zero() } else { T::one() / theta1 };
    let e = b1
        .iter()
        .zip(b2)
        .map(|(&x, &y)| (y - x - inv1 + T::one() / theta2) * theta2 * ep)
        .collect();
    let c = (T::one() / tau2 - T::one() / tau1) * theta2 * ep;
    Ok((e, c))
}

/// Numeric convergence test of
/// `Σ_{l̄≥0} ∏ 2^{l_j(b²_j-b¹_j-1/θ₁+1/θ₂)θ₂η'} (Σ_j 2^{l_j})^{(1/τ₂-1/τ₁)θ₂η'}`
/// over shells `max l_j = q`, `q ≤ truncation`; same decision rule as
/// [`theorem5_condition`]. Also requires `b¹_j + 1/τ₁ > b²_j + 1/τ₂`.
pub fn theorem5_3_condition<T: Real>(b1: &[T], b2: &[T], tau1: T, tau2: T, theta1: T, theta2: T, truncation: usize) -> Result<SeriesVerdict<T>> {
    let (e, c) = theorem5_3_exponents(b1, b2, tau1, tau2, theta1, theta2)?;
    for (j, (&x, &y)) in b1.iter().zip(b2).enumerate() {
        if !(x + T::one() / tau1 > y + T::one() / tau2) {
            return Err(Error::invalid("b", format!("need b1_{0} + 1/tau1 > b2_{0} + 1/tau2", j + 1)));
        }
    }
    let analytic = geometric_series_converges(&e, c);
    let m = e.len();
    let mut shells = vec![T::zero(); truncation + 1];
    for l in MultiRange::cube(m, 0, truncation as i64).iter() {
        let q = *l.iter().max().unwrap() as usize;
        let mut log2w = T::zero();
        let mut total = T::zero();
        for (j, &lj) in l.iter().enumerate() {
            log2w = log2w + T::of_i64(lj) * e[j];
            total = total + T::of(2.0).powi(lj as i32);
        }
        shells[q] = shells[q] + T::of(2.0).powf(log2w) * total.powf(c);
    }
    verdict_from_shells(shells, truncation, analytic)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(p: f64, tau: f64) -> LorentzParams<f64> {
        LorentzParams::new(p, tau).unwrap()
    }

    #[test]
    fn seq_norm_single_block() {
        let f = TrigPoly::<f64>::cos_product(&[3, 3]);
        for theta in [1.0, 2.0] {
            let b0 = SmoothParams::new(theta, vec![0.0, 0.0], vec![1, 1]).unwrap();
            assert!((seq_norm_b(&f, &lp(2.0, 2.0), &b0, None).unwrap() - 0.5).abs() < 1e-3);
        }
        let b1 = SmoothParams::new(1.0, vec![1.0, 1.0], vec![1, 1]).unwrap();
        assert!((seq_norm_b(&f, &lp(2.0, 2.0), &b1, None).unwrap() - 4.5).abs() < 1e-2);
        let z = TrigPoly::<f64>::zeros(&[2, 2]);
        assert_eq!(seq_norm_b(&z, &lp(2.0, 2.0), &b1, None).unwrap(), 0.0);
    }

    #[test]
    fn r_weights_multiply_terms() {
        let f = TrigPoly::<f64>::cos1(3);
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        let plain = seq_norm_b(&f, &lp(2.0, 2.0), &sp, None).unwrap();
        let weighted = seq_norm_b(&f, &lp(2.0, 2.0), &sp, Some(&[1.0])).unwrap();
        assert!((weighted - 4.0 * plain).abs() < 1e-12);
    }

    #[test]
    fn bold_rejects_constants() {
        let c = TrigPoly::<f64>::constant(1, 1.0);
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        assert!(matches!(norm_bold_b(&c, &lp(2.0, 2.0), &sp, None), Err(Error::NotRingMember { axis: 0 })));
        let z = TrigPoly::<f64>::zeros(&[1]);
        assert_eq!(norm_bold_b(&z, &lp(2.0, 2.0), &sp, None).unwrap(), 0.0);
    }

    #[test]
    fn theorem1_cos3() {
        let f = TrigPoly::<f64>::cos1(3);
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        let v = theorem1_rhs(&f, &lp(2.0, 2.0), &sp, None).unwrap();
        assert!((v - 3.0 / 2f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn theorem2_single_block() {
        let f = TrigPoly::<f64>::cos1(3);
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        let v = theorem2_rhs(&f, &lp(2.0, 2.0), &sp).unwrap();
        assert!((v - 3.0 / 2f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn theorem3_single_block() {
        let f = TrigPoly::<f64>::cos1(3);
        let n = 1.0 / 2f64.sqrt();
        for b in [0.0, 0.5] {
            let sp = SmoothParams::new(1.0, vec![b], vec![1]).unwrap();
            // block s = 2 is the whole of group l = 1
            let expect = n + 2f64.powf(b + 1.0) * n;
            for side in [Side::Lower, Side::Upper] {
                let v = theorem3_norm(&f, &lp(2.0, 2.0), &sp, side).unwrap();
                assert!((v - expect).abs() < 1e-3);
            }
        }
    }

    #[test]
    fn groups_partition_block_indices() {
        assert_eq!(group_range(0), (1, 1));
        assert_eq!(group_range(1), (2, 2));
        assert_eq!(group_range(2), (3, 4));
        assert_eq!(group_range(3), (5, 8));
        for s in 1u32..=1024 {
            let l = group_of(s);
            let (lo, hi) = group_range(l);
            assert!(lo <= s && s <= hi);
            let hits = (0..=11).filter(|&l| {
                let (lo, hi) = group_range(l);
                lo <= s && s <= hi
            });
            assert_eq!(hits.count(), 1);
        }
    }

    #[test]
    fn embedding_case_table() {
        let sp = SmoothParams::new(1.0, vec![0.0], vec![1]).unwrap();
        let e = embedding_exponents(&lp(3.0, 1.5), &sp).unwrap();
        assert_eq!((e.beta, e.gamma, e.covered), (1.5, 2.0, true));
        assert!((e.v[0] - 1.0).abs() < 1e-15);
        assert!((e.u[0] - 0.5).abs() < 1e-15);
        let e = embedding_exponents(&lp(3.0, 4.0), &sp).unwrap();
        assert_eq!((e.beta, e.gamma, e.covered), (2.0, 4.0, true));
        assert!(!embedding_exponents(&lp(1.5, 4.0), &sp).unwrap().covered);
        let sup = SmoothParams::new(f64::INFINITY, vec![0.5], vec![1]).unwrap();
        let e = embedding_exponents(&lp(3.0, 1.5), &sup).unwrap();
        assert!((e.v[0] - (0.5 + 1.0 / 1.5)).abs() < 1e-15);
        assert_eq!(e.u[0], 0.5);
    }

    #[test]
    fn series_strongly_negative_converges() {
        // exponent (b2-b1)θ₂η' = -3 per axis
        let v = theorem5_condition(&[3.0], &[0.0], 3.0, 2.5, f64::INFINITY, 1.0, 1 << 12).unwrap();
        assert!(v.converges && v.analytic);
        let oracle: f64 = (1..200_000).map(|s: i64| (s as f64).powf(-3.0) * ((s + 1) as f64).powf(1.0 / 2.5 - 1.0 / 3.0)).sum();
        assert!(((v.partial_sum + v.tail_estimate) / oracle - 1.0).abs() < 1e-3);
    }

    #[test]
    fn series_constant_terms_diverge() {
        let v = theorem5_condition(&[1.0], &[1.0], 2.0000001, 2.0, f64::INFINITY, 1.0, 1 << 10).unwrap();
        assert!(!v.converges && !v.analytic);
    }

    #[test]
    fn series_borderline_resolves_with_truncation() {
        // a_j = -1.3, c = 0.15: single-axis exponent -0.15, shell ratios creep down to 2^{-0.15}
        let (b1, b2) = ([1.3, 1.3], [0.0, 0.0]);
        let (t1, t2) = (3.0, 1.0 / (1.0 / 3.0 + 0.15));
        let small = theorem5_condition(&b1, &b2, t1, t2, f64::INFINITY, 1.0, 32);
        assert!(matches!(small, Err(Error::Inconclusive { .. })), "{small:?}");
        let large = theorem5_condition(&b1, &b2, t1, t2, f64::INFINITY, 1.0, 2048).unwrap();
        assert!(large.converges && large.analytic);
    }

    #[test]
    fn series_rejects_unordered_parameters() {
        assert!(theorem5_condition(&[1.0], &[0.0], 1.5, 3.0, f64::INFINITY, 1.0, 64).is_err());
        assert!(theorem5_condition(&[1.0], &[0.0], 3.0, 1.5, 1.0, 2.0, 64).is_err());
    }

    #[test]
    fn geometric_series_verdicts() {
        let v = theorem5_3_condition(&[2.5], &[0.5], 3.0, 1.5, f64::INFINITY, 1.0, 40).unwrap();
        assert!(v.converges && v.analytic);
        let (e, c) = theorem5_3_exponents(&[2.5], &[0.5], 3.0, 1.5, f64::INFINITY, 1.0).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-15 && (c - 1.0 / 3.0).abs() < 1e-15);
        let d = theorem5_3_condition(&[0.4], &[0.0], 3.0, 1.5, f64::INFINITY, 0.5, 40).unwrap();
        assert!(!d.converges && !d.analytic);
    }
}
