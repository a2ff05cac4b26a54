use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::scan::Scan;

pub const REPORT_SCHEMA: &str = "report_v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Passed on a seeded subsample because the full pair set exceeded the cap.
    SampledPass,
    Undetermined,
}

impl Verdict {
    pub fn passed(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::SampledPass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub m: usize,
}

/// Verdict, witness and metadata for one checked property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property_id: String,
    pub verdict: Verdict,
    pub pairs_tested: u64,
    pub witness: Option<Value>,
    pub max_error: f64,
    pub tolerance: f64,
    pub grid: GridSpec,
    pub seed: Option<u64>,
    pub note: Option<String>,
    pub elapsed_ms: f64,
}

impl PropertyReport {
    pub fn new(property_id: impl Into<String>, n: usize, m: usize, tolerance: f64) -> Self {
        Self {
            property_id: property_id.into(),
            verdict: Verdict::Pass,
            pairs_tested: 0,
            witness: None,
            max_error: 0.0,
            tolerance,
            grid: GridSpec { n, m },
            seed: None,
            note: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Records a failure. A failing report always carries a witness.
    pub fn fail(mut self, witness: Value) -> Self {
        self.verdict = Verdict::Fail;
        self.witness = Some(witness);
        self
    }

    pub fn undetermined(mut self, witness: Value) -> Self {
        self.verdict = Verdict::Undetermined;
        self.witness = Some(witness);
        self
    }

    /// Folds a scan outcome into the report; `witness` renders the failing indices.
    pub(crate) fn absorb(mut self, scan: &Scan, witness: impl FnOnce(usize, usize) -> Value) -> Self {
        self.pairs_tested += scan.tested;
        self.max_error = self.max_error.max(scan.max_error);
        if let Some((i, j)) = scan.first_failure {
            return self.fail(witness(i, j));
        }
        if scan.sampled && self.verdict == Verdict::Pass {
            self.verdict = Verdict::SampledPass;
        }
        self
    }

    /// Combines several sub-checks into one report: failures win, the first
    /// failing witness is kept, counts add up.
    pub fn merge(mut self, parts: impl IntoIterator<Item = PropertyReport>) -> Self {
        for part in parts {
            self.pairs_tested += part.pairs_tested;
            self.max_error = self.max_error.max(part.max_error);
            if self.verdict.passed() {
                match part.verdict {
                    Verdict::Fail | Verdict::Undetermined => {
                        self.verdict = part.verdict;
                        self.witness = Some(serde_json::json!({
                            "check": part.property_id,
                            "witness": part.witness,
                        }));
                    }
                    Verdict::SampledPass => self.verdict = Verdict::SampledPass,
                    Verdict::Pass => {}
                }
            }
        }
        self
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    pub fn redacted(mut self) -> Self {
        self.elapsed_ms = 0.0;
        self
    }
}

/// Aggregate of a suite run; `passed` is the conjunction of every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    pub suite: String,
    pub config: super::SuiteConfig,
    pub passed: bool,
    pub reports: Vec<PropertyReport>,
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn new(suite: &str, config: super::SuiteConfig, mut reports: Vec<PropertyReport>) -> Self {
        reports.sort_by(|a, b| a.property_id.cmp(&b.property_id));
        Self {
            schema: REPORT_SCHEMA.into(),
            suite: suite.into(),
            config,
            passed: reports.iter().all(PropertyReport::passed),
            reports,
            elapsed_ms: 0.0,
        }
    }

    /// Zeroes every timing field, leaving a payload that is a pure function
    /// of the configuration.
    pub fn redacted(mut self) -> Self {
        self.elapsed_ms = 0.0;
        self.reports = self.reports.into_iter().map(PropertyReport::redacted).collect();
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyReport> {
        self.reports.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
