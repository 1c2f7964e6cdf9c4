//! Reports: a stable JSON schema and a plain-text table.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::FORMAT_VERSION;
use crate::rational::{format_q, Ext, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No computable right-hand side (component mode, partial window).
    Unavailable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Unavailable => "unavailable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegreeSource {
    /// Shift of the local homology of a level component.
    LocalHomology,
    /// Local homology, confirmed by an analytic normal Hessian.
    Hessian,
    /// Recomputed from the germs of a component record.
    Germs,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentLine {
    #[serde(with = "crate::rational::serde_q")]
    pub f21: Q,
    pub dim: usize,
    pub betti: Vec<usize>,
    pub s: i64,
    pub source: DegreeSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeLine {
    pub k: usize,
    pub lhs: usize,
    pub rhs: Option<usize>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowReport {
    pub a: Ext,
    pub b: Ext,
    /// The window as written in the scenario, when an endpoint was moved off
    /// a critical value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub requested: Option<(Ext, Ext)>,
    pub degrees: Vec<DegreeLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryLine {
    pub lhs_total: usize,
    pub rhs_total: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelLine {
    #[serde(with = "crate::rational::serde_q")]
    pub level: Q,
    pub k: usize,
    pub lhs: usize,
    pub rhs: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohlagrLine {
    pub dims: Vec<usize>,
    pub betti: Vec<usize>,
    /// Least `c₀` such that the window `[−c, +∞)` gives `dims` for all `c ≥ c₀`.
    #[serde(with = "crate::rational::serde_q")]
    pub threshold: Q,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppendixALine {
    pub example: String,
    pub transverse_count: usize,
    pub contribution: usize,
    /// The same contribution read off the local homology of the plateau.
    pub contribution_from_homology: usize,
    pub total: usize,
    pub betti_sum: usize,
    pub lower_bound: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteLine {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub counterexamples: Vec<String>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub name: String,
    #[serde(default)]
    pub components: Vec<ComponentLine>,
    #[serde(default)]
    pub windows: Vec<WindowReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollaryLine>,
    #[serde(default)]
    pub levels: Vec<LevelLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohlagr: Option<CohlagrLine>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub appendix_a: Option<AppendixALine>,
    #[serde(default)]
    pub suites: Vec<SuiteLine>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            format_version: FORMAT_VERSION,
            name: name.into(),
            components: Vec::new(),
            windows: Vec::new(),
            corollary: None,
            levels: Vec::new(),
            cohlagr: None,
            appendix_a: None,
            suites: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn verdicts(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.windows
            .iter()
            .flat_map(|w| w.degrees.iter().map(|d| d.verdict))
            .chain(self.corollary.iter().map(|c| c.verdict))
            .chain(self.levels.iter().map(|l| l.verdict))
            .chain(self.cohlagr.iter().map(|c| c.verdict))
            .chain(self.appendix_a.iter().map(|a| a.verdict))
            .chain(self.suites.iter().map(|s| s.verdict))
    }

    /// True when nothing failed; unavailable cells do not count as failures.
    pub fn passed(&self) -> bool {
        self.verdicts().all(|v| v != Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.name);
        if !self.components.is_empty() {
            let _ = writeln!(out, "components:");
            let _ = writeln!(out, "  {:>10} {:>4} {:>12} {:>3}  source", "f21", "dim", "betti", "s");
            for c in &self.components {
                let _ = writeln!(
                    out,
                    "  {:>10} {:>4} {:>12} {:>3}  {:?}",
                    format_q(&c.f21),
                    c.dim,
                    format!("{:?}", c.betti),
                    c.s,
                    c.source
                );
            }
        }
        for w in &self.windows {
            let _ = write!(out, "window [{}, {})", w.a, w.b);
            if let Some((a, b)) = &w.requested {
                let _ = write!(out, "  (perturbed from [{a}, {b}))");
            }
            out.push('\n');
            for d in &w.degrees {
                let rhs = d.rhs.map_or("-".to_string(), |r| r.to_string());
                let _ = writeln!(
                    out,
                    "  k={}  lhs={}  rhs={}  {}",
                    d.k,
                    d.lhs,
                    rhs,
                    d.verdict.label()
                );
            }
        }
        if let Some(c) = &self.corollary {
            let _ = writeln!(
                out,
                "corollary: {} >= {}  {}",
                c.lhs_total,
                c.rhs_total,
                c.verdict.label()
            );
        }
        for l in &self.levels {
            let _ = writeln!(
                out,
                "level {}  k={}  lhs={}  rhs={}  {}",
                format_q(&l.level),
                l.k,
                l.lhs,
                l.rhs,
                l.verdict.label()
            );
        }
        if let Some(c) = &self.cohlagr {
            let _ = writeln!(
                out,
                "stabilized dims {:?} vs betti {:?} (threshold {})  {}",
                c.dims,
                c.betti,
                format_q(&c.threshold),
                c.verdict.label()
            );
        }
        if let Some(a) = &self.appendix_a {
            let _ = writeln!(
                out,
                "example {}: transverse {} + contribution {} (homology {}) = {} >= {}; lower bound {}  {}",
                a.example,
                a.transverse_count,
                a.contribution,
                a.contribution_from_homology,
                a.total,
                a.betti_sum,
                a.lower_bound,
                a.verdict.label()
            );
        }
        for s in &self.suites {
            let _ = writeln!(
                out,
                "suite {:<24} cases={:<5} failures={:<4} {}",
                s.name,
                s.cases,
                s.failures,
                s.verdict.label()
            );
            for c in &s.counterexamples {
                let _ = writeln!(out, "    {c}");
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "result: {}", if self.passed() { "pass" } else { "FAIL" });
        out
    }
}
