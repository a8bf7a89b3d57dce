use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::seq::Seed;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Grid,
    Recurrence,
    Symbolic,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Grid => "grid",
            Mode::Recurrence => "recurrence",
            Mode::Symbolic => "symbolic",
        })
    }
}

/// What was covered: per-parameter ranges and seeds for grid-like runs, the
/// fixed rank and case count for symbolic runs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GridSummary {
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub ranges: BTreeMap<String, [i64; 2]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub fixed: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
}

pub(crate) fn seed_strings(s: &Seed) -> [String; 2] {
    [s.g0.to_string(), s.g1.to_string()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub point: BTreeMap<String, i64>,
    pub seed: Option<[String; 2]>,
    pub lhs: String,
    pub rhs: String,
    pub diff: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub(crate) order: (Vec<i64>, Option<Seed>),
}

impl Failure {
    /// A numeric mismatch; `order` lists the point's values in parameter order.
    pub(crate) fn numeric(
        point: BTreeMap<String, i64>,
        order: Vec<i64>,
        seed: Option<&Seed>,
        lhs: &BigInt,
        rhs: &BigInt,
        note: Option<String>,
    ) -> Failure {
        Failure {
            point,
            seed: seed.map(seed_strings),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            diff: (lhs - rhs).to_string(),
            note,
            order: (order, seed.cloned()),
        }
    }

    pub fn point_string(&self) -> String {
        self.point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn seed_string(&self) -> String {
        match &self.seed {
            Some([a, b]) => format!("({a},{b})"),
            None => String::new(),
        }
    }
}

/// Result of one verification run over one identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub version: u32,
    pub identity: String,
    pub paper_tag: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub grid: GridSummary,
    pub total: u64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self) -> &'static str {
        if self.passed() {
            "PASS"
        } else {
            "FAIL"
        }
    }

    pub(crate) fn sort_failures(&mut self) {
        self.failures.sort_by(|a, b| a.order.cmp(&b.order));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Multi-line human summary; at most `max_failures` failures are listed.
    pub fn to_human(&self, max_failures: usize) -> String {
        let mut out = format!(
            "{} {} [{}] {}{}: {} checked, {} failed",
            self.status(),
            self.identity,
            self.paper_tag,
            self.mode,
            self.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default(),
            self.total,
            self.failures.len()
        );
        if !self.grid.fixed.is_empty() {
            let fixed: Vec<String> = self.grid.fixed.iter().map(|(k, v)| format!("{k}={v}")).collect();
            out.push_str(&format!(", {}", fixed.join(" ")));
        }
        if self.elapsed_ms > 0 {
            out.push_str(&format!(" in {} ms", self.elapsed_ms));
        }
        for f in self.failures.iter().take(max_failures) {
            out.push_str(&format!("\n  at {}", f.point_string()));
            if f.seed.is_some() {
                out.push_str(&format!(" seed={}", f.seed_string()));
            }
            out.push_str(&format!(": lhs={} rhs={} diff={}", f.lhs, f.rhs, f.diff));
            if let Some(note) = &f.note {
                out.push_str(&format!(" ({note})"));
            }
        }
        if self.failures.len() > max_failures {
            out.push_str(&format!("\n  ... {} more", self.failures.len() - max_failures));
        }
        out
    }
}
