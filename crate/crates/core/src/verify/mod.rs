//! Experiment harness: corpora, per-property ratio checks and reports.
//!
//! Every check turns a corpus into rows `(id, lhs, rhs, lhs/rhs)` over a
//! parameter sweep, reruns the same recipe at doubled degree, and compares
//! the ratio window against frozen golden windows.

mod checks;
mod corpus;
mod profile;
mod report;

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::{bound_of, rel_2_2_integral, thm5_plan, Thm5Case, Thm5Kind, CHECKS};
pub use corpus::{generate_corpus, lacunary, lacunary_1d, lacunary_smax, random_poly, Corpus, Family, Member, LACUNARY_RHOS};
pub use profile::{ModulusState, Profile};
pub use report::{
    growth, Bound, GoldenWindows, RatioReport, RatioRow, RatioStats, StabilityProbe, Verdict, Window, EXACT_SLACK, GOLDEN_SLACK,
    STABILITY_LIMIT,
};

use crate::error::{Error, Result};
use crate::params::{LorentzParams, SmoothParams};

/// Parameter sweep: every `(p, τ)` against every admissible `(θ, b)` with
/// `b` uniform across axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub lorentz: Vec<(f64, f64)>,
    pub theta: Vec<f64>,
    pub b: Vec<f64>,
}

impl Sweep {
    pub fn reference() -> Self {
        Sweep {
            lorentz: vec![(2.0, 2.0), (3.0, 1.5), (3.0, 3.0)],
            theta: vec![1.0, 2.0, f64::INFINITY],
            b: vec![-0.25, 0.0, 1.0],
        }
    }

    /// `(θ, b)` pairs with `b > -1/θ`.
    pub fn smooth_pairs(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for &theta in &self.theta {
            for &b in &self.b {
                if b > -1.0 / theta {
                    out.push((theta, b));
                }
            }
        }
        out
    }

    fn label(&self) -> String {
        let lp: Vec<String> = self.lorentz.iter().map(|(p, t)| format!("{p}/{t}")).collect();
        let th: Vec<String> = self.theta.iter().map(|x| x.to_string()).collect();
        let b: Vec<String> = self.b.iter().map(|x| x.to_string()).collect();
        format!("lp={};theta={};b={}", lp.join(","), th.join(","), b.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub dim: usize,
    pub max_degree: usize,
    pub families: Vec<Family>,
    pub sweep: Sweep,
    /// Difference order on every axis.
    pub k: u32,
    pub h_grid: usize,
    /// Sample grid; `None` picks [`verify_grid`].
    pub grid: Option<Vec<usize>>,
    /// Rerun every check at doubled degree.
    pub probe: bool,
    /// Fixed window of the `rel_2_2_weight` check.
    pub rel_window: Window,
}

/// Reference degree per dimension.
pub fn reference_degree(dim: usize) -> usize {
    match dim {
        1 => 16,
        2 => 16,
        _ => 4,
    }
}

/// Lattice points per axis used by the harness.
pub fn default_h_grid(dim: usize) -> usize {
    if dim == 1 {
        17
    } else {
        9
    }
}

/// Sample grid shared by the base run and its doubled-degree probe: alias
/// free up to degree `2·max_degree`, at least 1024 points for `m = 1`.
pub fn verify_grid(dim: usize, max_degree: usize) -> Vec<usize> {
    let n = (4 * max_degree + 1).next_power_of_two();
    let per_axis = if dim == 1 { (4 * n).max(1024) } else { n };
    vec![per_axis; dim]
}

impl VerifyConfig {
    pub fn reference(dim: usize, seed: u64) -> Self {
        VerifyConfig {
            seed,
            dim,
            max_degree: reference_degree(dim),
            families: Family::ALL.to_vec(),
            sweep: Sweep::reference(),
            k: 2,
            h_grid: default_h_grid(dim),
            grid: None,
            probe: true,
            rel_window: Window { min: 0.15, max: 3.5 },
        }
    }

    pub fn grid_shape(&self) -> Vec<usize> {
        self.grid.clone().unwrap_or_else(|| verify_grid(self.dim, self.max_degree))
    }

    /// Key into [`GoldenWindows`].
    pub fn fingerprint(&self) -> String {
        let fam: Vec<&str> = self.families.iter().map(|f| f.name()).collect();
        let grid: Vec<String> = self.grid_shape().iter().map(|n| n.to_string()).collect();
        format!(
            "m={};deg={};seed={};families={};k={};h={};grid={};{}",
            self.dim,
            self.max_degree,
            self.seed,
            fam.join(","),
            self.k,
            self.h_grid,
            grid.join("x"),
            self.sweep.label()
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::invalid("dim", "must be 1, 2 or 3"));
        }
        if self.max_degree == 0 {
            return Err(Error::invalid("max_degree", "must be at least 1"));
        }
        if self.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if self.sweep.lorentz.is_empty() || self.sweep.smooth_pairs().is_empty() {
            return Err(Error::invalid("sweep", "needs at least one (p, tau) and one admissible (theta, b)"));
        }
        for &(p, tau) in &self.sweep.lorentz {
            LorentzParams::new(p, tau)?;
        }
        Ok(())
    }
}

/// A corpus with its profiles for every `(p, τ)` of the sweep.
pub(crate) struct Data {
    pub corpus: Corpus,
    pub lps: Vec<LorentzParams<f64>>,
    /// Sweep points as `(lp index, smoothness)`.
    pub points: Vec<(usize, SmoothParams<f64>)>,
    /// `profiles[member][lp]`.
    pub profiles: Vec<Vec<Profile>>,
    pub h_grid: usize,
    pub k: Vec<u32>,
}

impl Data {
    fn new(corpus: Corpus, config: &VerifyConfig) -> Result<Self> {
        let m = corpus.dim;
        let lps: Vec<LorentzParams<f64>> =
            config.sweep.lorentz.iter().map(|&(p, t)| LorentzParams::new(p, t)).collect::<Result<_>>()?;
        let sps: Vec<SmoothParams<f64>> = config
            .sweep
            .smooth_pairs()
            .into_iter()
            .map(|(theta, b)| SmoothParams::uniform(m, theta, b, config.k))
            .collect::<Result<_>>()?;
        let mut points = Vec::new();
        for i in 0..lps.len() {
            for sp in &sps {
                points.push((i, sp.clone()));
            }
        }
        // Every (θ, b̄) any check asks a profile for, per lp index.
        let mut registered: Vec<Vec<SmoothParams<f64>>> = vec![sps.clone(); lps.len()];
        for case in thm5_plan(config, m) {
            if case.kind != Thm5Kind::Bold || !case.certified() {
                continue;
            }
            for (idx, sp) in [(case.lp1, &case.sp1), (case.lp2, &case.sp2)] {
                if !registered[idx].iter().any(|s| s == sp) {
                    registered[idx].push(sp.clone());
                }
            }
        }
        let shape = config.grid_shape();
        let profiles = corpus
            .members
            .iter()
            .map(|member| {
                let blocks = Arc::new(OnceLock::new());
                lps.iter()
                    .enumerate()
                    .map(|(i, lp)| Profile::new(&member.poly, &shape, *lp, config.k, config.h_grid, registered[i].clone(), blocks.clone()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Data { corpus, lps, points, profiles, h_grid: config.h_grid, k: vec![config.k; m] })
    }

    /// Applies `row_fn` to every member in parallel; rows come back in
    /// member order.
    pub fn per_member<F>(&self, row_fn: F) -> Result<Vec<RatioRow>>
    where
        F: Fn(usize) -> Result<Vec<RatioRow>> + Sync + Send,
    {
        let parts: Vec<Result<Vec<RatioRow>>> = (0..self.corpus.members.len()).into_par_iter().map(row_fn).collect();
        let mut rows = Vec::new();
        for p in parts {
            rows.extend(p?);
        }
        Ok(rows)
    }
}

/// A configured run: base corpus plus the doubled-degree probe corpus, with
/// profiles cached across checks.
pub struct Harness {
    config: VerifyConfig,
    golden: GoldenWindows,
    custom_corpus: bool,
    base: Data,
    probe: Option<Data>,
}

impl Harness {
    pub fn new(config: VerifyConfig) -> Result<Self> {
        config.validate()?;
        let corpus = generate_corpus(config.seed, config.dim, config.max_degree, &config.families)?;
        Self::build(config, corpus, false)
    }

    /// Runs on a caller-supplied corpus; the probe still uses the generated
    /// doubled-degree corpus and no golden windows apply.
    pub fn with_corpus(config: VerifyConfig, corpus: Corpus) -> Result<Self> {
        config.validate()?;
        if corpus.dim != config.dim {
            return Err(Error::DimensionMismatch { expected: config.dim, got: corpus.dim });
        }
        if let Some(m) = corpus.members.iter().find(|m| !m.poly.is_ring_member() || m.poly.dim() != config.dim) {
            return Err(Error::invalid("corpus", format!("member {} is not a mean-zero polynomial of dimension {}", m.id, config.dim)));
        }
        Self::build(config, corpus, true)
    }

    fn build(config: VerifyConfig, corpus: Corpus, custom: bool) -> Result<Self> {
        let probe = if config.probe {
            let c = generate_corpus(config.seed, config.dim, 2 * config.max_degree, &config.families)?;
            Some(Data::new(c, &config)?)
        } else {
            None
        };
        let base = Data::new(corpus, &config)?;
        Ok(Harness { config, golden: GoldenWindows::builtin(), custom_corpus: custom, base, probe })
    }

    pub fn set_golden(&mut self, golden: GoldenWindows) {
        self.golden = golden;
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    pub fn corpus(&self) -> &Corpus {
        &self.base.corpus
    }

    pub fn run(&self, check: &str) -> Result<RatioReport> {
        let bound = bound_of(check)?;
        let out = checks::run_rows(check, &self.base, &self.config)?;
        let probe_rows = match &self.probe {
            Some(p) if matches!(bound, Bound::TwoSided | Bound::Upper | Bound::Exact) => {
                Some((p.corpus.max_degree, checks::run_rows(check, p, &self.config)?.rows))
            }
            _ => None,
        };
        let window = match bound {
            Bound::Window => Some(self.config.rel_window),
            _ if self.custom_corpus => None,
            _ => self.golden.get(&self.config.fingerprint(), check),
        };
        Ok(RatioReport::assemble(
            check,
            bound,
            self.config.dim,
            self.config.seed,
            self.config.max_degree,
            out.rows,
            probe_rows,
            window,
            out.skipped,
            out.notes,
            out.failures,
        ))
    }

    /// Every registered check in registry order.
    pub fn run_all(&self) -> Vec<(String, Result<RatioReport>)> {
        CHECKS.iter().map(|&c| (c.to_string(), self.run(c))).collect()
    }
}

/// One check on a given corpus.
pub fn run_check(check: &str, corpus: &Corpus, config: &VerifyConfig) -> Result<RatioReport> {
    bound_of(check)?;
    Harness::with_corpus(config.clone(), corpus.clone())?.run(check)
}
