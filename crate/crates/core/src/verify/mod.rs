//! Theorem-check engine: tolerances, reports, parallel scans, the
//! discontinuity heuristic, seeded generators and suite orchestration.

pub mod continuity;
pub mod gen;
pub mod lattice;
mod report;
pub(crate) mod scan;
mod suite;

use serde::{Deserialize, Serialize};

pub use continuity::discontinuity_scan as discontinuity_heuristic;
pub use gen::{gen_negation, GenKind};
pub use report::{GridSpec, PropertyReport, SuiteReport, Verdict, REPORT_SCHEMA};
pub use scan::PAIR_CAP;
pub use suite::{phi_n_cases, run_suite, SUITES};

/// Tolerance for comparing computed function values.
pub const EPS: f64 = 1e-9;
/// Tolerance for reconstructions that stack two evaluations.
pub const RECON_TOL: f64 = 1e-7;
/// Default resolution for pair-quadratic checks.
pub const M_PAIR: usize = 11;
/// Default resolution for pointwise checks.
pub const M_POINT: usize = 41;
pub const DEFAULT_TRIALS: usize = 50;

/// Parameters shared by every property of a suite run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Dimensions to exercise.
    pub n: Vec<usize>,
    pub m_pair: usize,
    pub m_point: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n: vec![2, 3],
            m_pair: M_PAIR,
            m_point: M_POINT,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }
}
