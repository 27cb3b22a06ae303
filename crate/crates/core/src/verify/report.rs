//! Ratio reports, statistics and golden windows.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which side of a ratio the property constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// Two-sided equivalence `c₁ ≤ lhs/rhs ≤ c₂`.
    TwoSided,
    /// `lhs ≤ C·rhs`.
    Upper,
    /// `lhs ≤ rhs` with no constant; checked directly, not against a
    /// golden window.
    Exact,
    /// Fixed configured window, no degree dependence.
    Window,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `None` for 0/0.
    pub ratio: Option<f64>,
}

impl RatioRow {
    pub fn new(id: String, lhs: f64, rhs: f64) -> Self {
        let ratio = if lhs == 0.0 && rhs == 0.0 { None } else { Some(lhs / rhs) };
        RatioRow { id, lhs, rhs, ratio }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioStats {
    pub count: usize,
    pub degenerate: usize,
    /// Nonzero over zero, or any non-finite value.
    pub invalid: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl RatioStats {
    pub fn of(rows: &[RatioRow]) -> Self {
        let mut vals = Vec::new();
        let mut degenerate = 0;
        let mut invalid = 0;
        for r in rows {
            match r.ratio {
                None => degenerate += 1,
                Some(x) if x.is_finite() && r.lhs.is_finite() && r.rhs.is_finite() => vals.push(x),
                Some(_) => invalid += 1,
            }
        }
        vals.sort_by(f64::total_cmp);
        let (min, median, max) = if vals.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let n = vals.len();
            let median = if n % 2 == 1 { vals[n / 2] } else { 0.5 * (vals[n / 2 - 1] + vals[n / 2]) };
            (vals[0], median, vals[n - 1])
        };
        RatioStats { count: vals.len(), degenerate, invalid, min, median, max }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub min: f64,
    pub max: f64,
}

impl Window {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

/// Rerun at doubled degree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityProbe {
    pub max_degree: usize,
    pub stats: RatioStats,
    pub min_growth: f64,
    pub max_growth: f64,
}

/// Factor by which a window end moved; 1 when both ends are zero.
pub fn growth(a: f64, b: f64) -> f64 {
    if a == b {
        return 1.0;
    }
    let (lo, hi) = if a.abs() < b.abs() { (a.abs(), b.abs()) } else { (b.abs(), a.abs()) };
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

pub const STABILITY_LIMIT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub check: String,
    pub bound: Bound,
    pub dim: usize,
    pub seed: u64,
    pub max_degree: usize,
    pub rows: Vec<RatioRow>,
    pub stats: RatioStats,
    pub probe: Option<StabilityProbe>,
    pub window: Option<Window>,
    pub skipped: Vec<String>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl RatioReport {
    /// Assembles a report and decides the verdict.
    #[allow(clippy::too_many_arguments)]
    pub fn assemble(
        check: &str,
        bound: Bound,
        dim: usize,
        seed: u64,
        max_degree: usize,
        rows: Vec<RatioRow>,
        probe_rows: Option<(usize, Vec<RatioRow>)>,
        window: Option<Window>,
        skipped: Vec<String>,
        mut notes: Vec<String>,
        extra_failures: Vec<String>,
    ) -> Self {
        let stats = RatioStats::of(&rows);
        let mut reasons = extra_failures;
        if stats.invalid > 0 {
            reasons.push(format!("{} rows with nonzero/zero or non-finite ratio", stats.invalid));
        }
        if stats.count == 0 && rows.is_empty() && skipped.is_empty() {
            reasons.push("no rows".into());
        }
        let probe = probe_rows.map(|(deg, pr)| {
            let ps = RatioStats::of(&pr);
            if ps.invalid > 0 {
                reasons.push(format!("probe: {} rows with nonzero/zero or non-finite ratio", ps.invalid));
            }
            if bound == Bound::Exact {
                if let Some(r) = pr.iter().find(|r| r.ratio.is_some_and(|x| x > 1.0 + EXACT_SLACK)) {
                    reasons.push(format!("probe row {} exceeds 1: {:?}", r.id, r.ratio));
                }
            }
            StabilityProbe {
                max_degree: deg,
                stats: ps,
                min_growth: growth(stats.min, ps.min),
                max_growth: growth(stats.max, ps.max),
            }
        });
        match bound {
            Bound::Exact => {
                if let Some(r) = rows.iter().find(|r| r.ratio.is_some_and(|x| x > 1.0 + EXACT_SLACK)) {
                    reasons.push(format!("row {} exceeds 1: {:?}", r.id, r.ratio));
                }
            }
            Bound::Window => {
                let w = window.expect("window-bounded check needs a window");
                if let Some(r) = rows.iter().find(|r| r.ratio.is_some_and(|x| !w.contains(x))) {
                    reasons.push(format!("row {} ratio {:?} outside [{}, {}]", r.id, r.ratio, w.min, w.max));
                }
            }
            Bound::TwoSided | Bound::Upper => {
                if let Some(p) = &probe {
                    if !(p.max_growth < STABILITY_LIMIT) {
                        reasons.push(format!("max ratio grew by {:.3}x under degree doubling", p.max_growth));
                    }
                    if bound == Bound::TwoSided && !(p.min_growth < STABILITY_LIMIT) {
                        reasons.push(format!("min ratio moved by {:.3}x under degree doubling", p.min_growth));
                    }
                }
                match window {
                    Some(w) if stats.count > 0 => {
                        if stats.max > w.max * GOLDEN_SLACK {
                            reasons.push(format!("max ratio {} above golden {}", stats.max, w.max));
                        }
                        if bound == Bound::TwoSided && stats.min < w.min / GOLDEN_SLACK {
                            reasons.push(format!("min ratio {} below golden {}", stats.min, w.min));
                        }
                    }
                    Some(_) => {}
                    None => notes.push("no golden window for this configuration".into()),
                }
            }
        }
        RatioReport {
            check: check.to_string(),
            bound,
            dim,
            seed,
            max_degree,
            rows,
            stats,
            probe,
            window,
            skipped,
            notes,
            verdict: Verdict { pass: reasons.is_empty(), reasons },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Per-row table.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,lhs,rhs,ratio\n");
        for r in &self.rows {
            let ratio = r.ratio.map_or(String::new(), |x| format!("{x:e}"));
            writeln!(out, "\"{}\",{:e},{:e},{}", r.id.replace('"', "\"\""), r.lhs, r.rhs, ratio).unwrap();
        }
        out
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        let s = &self.stats;
        let probe = self
            .probe
            .map_or(String::new(), |p| format!(" probe(deg {}) growth min {:.3}x max {:.3}x", p.max_degree, p.min_growth, p.max_growth));
        format!(
            "{} {}: n={} degenerate={} min={:.4e} median={:.4e} max={:.4e}{}{}",
            self.check,
            if self.verdict.pass { "PASS" } else { "FAIL" },
            s.count,
            s.degenerate,
            s.min,
            s.median,
            s.max,
            probe,
            if self.skipped.is_empty() { String::new() } else { format!(" skipped={}", self.skipped.len()) },
        )
    }
}

/// Ratios of an `Exact` check may exceed 1 by this relative amount.
pub const EXACT_SLACK: f64 = 1e-9;

/// Multiplicative slack applied to golden windows.
pub const GOLDEN_SLACK: f64 = 1.05;

/// Frozen windows keyed by configuration fingerprint, then check name.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GoldenWindows {
    pub configs: BTreeMap<String, BTreeMap<String, Window>>,
}

impl GoldenWindows {
    pub fn builtin() -> Self {
        Self::from_json(include_str!("golden.json")).expect("bundled golden windows parse")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("windows serialize")
    }

    pub fn get(&self, fingerprint: &str, check: &str) -> Option<Window> {
        self.configs.get(fingerprint).and_then(|c| c.get(check)).copied()
    }

    /// Records the observed window of each report under `fingerprint`.
    pub fn freeze(&mut self, fingerprint: &str, reports: &[RatioReport]) {
        let entry = self.configs.entry(fingerprint.to_string()).or_default();
        for r in reports {
            if matches!(r.bound, Bound::TwoSided | Bound::Upper) && r.stats.count > 0 {
                entry.insert(r.check.clone(), Window { min: r.stats.min, max: r.stats.max });
            }
        }
    }
}
