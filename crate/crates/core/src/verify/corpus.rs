//! Deterministic test corpora of mean-zero trigonometric polynomials.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::MultiRange;
use crate::poly::TrigPoly;

/// Generator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SingleBlock,
    Lacunary,
    Random,
    Tensor,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::SingleBlock, Family::Lacunary, Family::Random, Family::Tensor];

    pub fn name(self) -> &'static str {
        match self {
            Family::SingleBlock => "single_block",
            Family::Lacunary => "lacunary",
            Family::Random => "random",
            Family::Tensor => "tensor",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown corpus family `{s}`")))
    }
}

/// Lacunary decay rates.
pub const LACUNARY_RHOS: [f64; 3] = [0.5, 1.0, 2.0];

/// Random members per corpus, by dimension.
fn random_count(dim: usize) -> usize {
    if dim == 1 {
        4
    } else {
        3
    }
}

/// Spectral decay exponents cycled through by the random family.
const RANDOM_DECAY: [f64; 3] = [0.5, 1.0, 1.5];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Member {
    pub id: String,
    pub family: Family,
    /// Generator parameters, e.g. `rho=1` or `decay=0.5`.
    pub params: String,
    pub poly: TrigPoly<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub seed: u64,
    pub dim: usize,
    pub max_degree: usize,
    pub members: Vec<Member>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `Σ_{s: 2^s ≤ n} 2^{-ρs} cos(2^s x)` starting at `s = 0`, so frequency
/// `2^s` sits in block `s + 1`.
pub fn lacunary_1d(rho: f64, s_max: u32) -> TrigPoly<f64> {
    let mut out = TrigPoly::zeros(&[1usize << s_max]);
    for s in 0..=s_max {
        let c = 2f64.powf(-rho * s as f64) * 0.5;
        let a = 1i64 << s;
        out.set_coeff(&[a], Complex::new(c, 0.0));
        out.set_coeff(&[-a], Complex::new(c, 0.0));
    }
    out
}

/// Largest `s` with `2^s ≤ n`.
pub fn lacunary_smax(n: usize) -> u32 {
    assert!(n >= 1);
    usize::BITS - 1 - n.leading_zeros()
}

/// Diagonal lacunary sum `Σ_s 2^{-ρs} ∏_j cos(2^s x_j)`.
pub fn lacunary(dim: usize, rho: f64, s_max: u32) -> TrigPoly<f64> {
    let mut out = TrigPoly::zeros(&vec![1usize << s_max; dim]);
    for s in 0..=s_max {
        let term = TrigPoly::cos_product(&vec![1i64 << s; dim]).resized(out.degree()).scaled(2f64.powf(-rho * s as f64));
        out = &out + &term;
    }
    out
}

/// Real polynomial with every frequency `|k_j| ∈ [1, n]` populated by
/// Gaussian coefficients times `∏(1+|k_j|)^{-decay}`.
pub fn random_poly(dim: usize, n: usize, decay: f64, rng: &mut ChaCha8Rng) -> TrigPoly<f64> {
    let mut out = TrigPoly::zeros(&vec![n; dim]);
    let n = n as i64;
    for k in MultiRange::cube(dim, -n, n).iter() {
        if k.contains(&0) {
            continue;
        }
        // Draw once per conjugate pair, on the representative with k_1 > 0.
        if k[0] < 0 {
            continue;
        }
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let w = k.iter().map(|&kj| (1.0 + kj.abs() as f64).powf(-decay)).product::<f64>();
        let a = Complex::new(re, im) * (0.5 * w);
        let neg: Vec<i64> = k.iter().map(|&kj| -kj).collect();
        out.set_coeff(&k, a);
        out.set_coeff(&neg, a.conj());
    }
    out
}

fn family_rng(seed: u64, family: Family, dim: usize) -> ChaCha8Rng {
    let tag = match family {
        Family::SingleBlock => 1u64,
        Family::Lacunary => 2,
        Family::Random => 3,
        Family::Tensor => 4,
    };
    ChaCha8Rng::seed_from_u64(seed ^ (tag << 56) ^ ((dim as u64) << 48))
}

fn single_block_freqs(dim: usize, n: usize) -> Vec<Vec<i64>> {
    let n = n as i64;
    let mut out: Vec<Vec<i64>> = if dim == 1 {
        vec![vec![1], vec![3], vec![n / 2 + 1], vec![n]]
    } else {
        let mut v = vec![vec![1; dim], vec![3; dim], vec![n; dim]];
        let mut mixed = vec![1; dim];
        mixed[0] = n / 2 + 1;
        v.insert(2, mixed);
        v
    };
    for f in out.iter_mut() {
        for x in f.iter_mut() {
            *x = (*x).clamp(1, n);
        }
    }
    out.dedup();
    out
}

/// Builds the corpus for `families`, each member of degree at most
/// `max_degree` per axis.
pub fn generate_corpus(seed: u64, dim: usize, max_degree: usize, families: &[Family]) -> Result<Corpus> {
    if !(1..=3).contains(&dim) {
        return Err(Error::invalid("dim", "must be 1, 2 or 3"));
    }
    if max_degree == 0 {
        return Err(Error::invalid("max_degree", "must be at least 1"));
    }
    let mut fams = families.to_vec();
    fams.sort();
    fams.dedup();
    let mut members = Vec::new();
    for fam in fams {
        let mut rng = family_rng(seed, fam, dim);
        match fam {
            Family::SingleBlock => {
                for a in single_block_freqs(dim, max_degree) {
                    let label = a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                    members.push(Member {
                        id: format!("single[{label}]"),
                        family: fam,
                        params: format!("a=({label})"),
                        poly: TrigPoly::cos_product(&a),
                    });
                }
            }
            Family::Lacunary => {
                let s_max = lacunary_smax(max_degree);
                for rho in LACUNARY_RHOS {
                    members.push(Member {
                        id: format!("lacunary[rho={rho}]"),
                        family: fam,
                        params: format!("rho={rho},smax={s_max}"),
                        poly: lacunary(dim, rho, s_max),
                    });
                }
            }
            Family::Random => {
                for i in 0..random_count(dim) {
                    let decay = RANDOM_DECAY[i % RANDOM_DECAY.len()];
                    members.push(Member {
                        id: format!("random[{i}]"),
                        family: fam,
                        params: format!("decay={decay}"),
                        poly: random_poly(dim, max_degree, decay, &mut rng),
                    });
                }
            }
            Family::Tensor => {
                if dim == 1 {
                    continue;
                }
                for i in 0..2 {
                    let decay = RANDOM_DECAY[i % RANDOM_DECAY.len()];
                    let factors: Vec<TrigPoly<f64>> = (0..dim).map(|_| random_poly(1, max_degree, decay, &mut rng)).collect();
                    members.push(Member {
                        id: format!("tensor[{i}]"),
                        family: fam,
                        params: format!("decay={decay}"),
                        poly: TrigPoly::tensor_of(&factors),
                    });
                }
            }
        }
    }
    debug_assert!(members.iter().all(|m| m.poly.is_ring_member()));
    Ok(Corpus { seed, dim, max_degree, members })
}
