//! n-dimensional fuzzy negations on `L_n([0,1])`.
//!
//! A representable negation `Ñ₁…Ñₙ` maps `x` to
//! `(N₁(πₙ(x)), …, Nₙ(π₁(x)))`; note the index reversal. The remaining kinds
//! are the extremes `𝒩_⊥`, `𝒩_⊤`, the non-representable fixture `Collapse`,
//! conjugates `𝒩^φ`, and `𝒩_S^φ` built from an automorphism.
//!
//! Deciders sample the simplex grid exhaustively. Inputs are exact grid
//! values, so premises are tested exactly; outputs are computed, so
//! conclusions carry the tolerance [`EPS`].

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ndim_automorphism::NDimAutomorphism;
use crate::scalar::Scalar;
use crate::simplex::{leq_tol, subset_tol, sup_dist, unit_grid, NDInterval, SimplexGrid};
use crate::solve::{fixed_point_decreasing, DEFAULT_MAX_ITER};
use crate::unit_negation::{EquilibriumKind, EquilibriumResult, UnitNegation};
use crate::verify::continuity::{self, DEFAULT_LEVELS};
use crate::verify::scan::{self, Check};
use crate::verify::{GridSpec, PropertyReport, EPS, RECON_TOL};

/// Resolution on which a representable chain `N₁ ≤ … ≤ Nₙ` is validated.
pub const CHAIN_CHECK_M: usize = 101;
/// Default tabulation resolution for induced negations.
pub const INDUCED_M: usize = 101;

fn default_dim() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NdNegNode {
    /// `Ñ₁…Ñₙ` with `N₁ ≤ … ≤ Nₙ`.
    Representable { negs: Vec<UnitNegation> },
    /// `x ↦ /N(πₙ(x))/`.
    Collapse {
        inner: UnitNegation,
        #[serde(default = "default_dim")]
        n: usize,
    },
    BottomN { n: usize },
    TopN { n: usize },
    /// `φ⁻¹ ∘ 𝒩 ∘ φ`.
    ConjugateN {
        inner: Box<NDimNegation>,
        by: NDimAutomorphism,
    },
    /// `𝒩_S^φ`; `n`, when given, must match the automorphism.
    StrongFromAuto {
        phi: NDimAutomorphism,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    },
}

/// A validated n-dimensional negation expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NdNegNode", into = "NdNegNode")]
pub struct NDimNegation {
    node: NdNegNode,
}

impl TryFrom<NdNegNode> for NDimNegation {
    type Error = Error;

    fn try_from(node: NdNegNode) -> Result<Self> {
        Self::new(node)
    }
}

impl From<NDimNegation> for NdNegNode {
    fn from(n: NDimNegation) -> Self {
        n.node
    }
}

impl NDimNegation {
    pub fn new(node: NdNegNode) -> Result<Self> {
        match &node {
            NdNegNode::Representable { negs } => validate_chain(negs)?,
            NdNegNode::Collapse { n, .. } | NdNegNode::BottomN { n } | NdNegNode::TopN { n } => {
                if *n == 0 {
                    return Err(Error::Argument("dimension must be at least 1".into()));
                }
            }
            NdNegNode::ConjugateN { inner, by } => {
                if inner.dim() != by.dim() {
                    return Err(Error::Argument(format!(
                        "conjugating a {}-dimensional negation by a {}-dimensional automorphism",
                        inner.dim(),
                        by.dim()
                    )));
                }
                require_full_domain(by)?;
            }
            NdNegNode::StrongFromAuto { phi, n } => {
                if let Some(n) = n {
                    if *n != phi.dim() {
                        return Err(Error::Argument(format!(
                            "declared dimension {n} differs from automorphism dimension {}",
                            phi.dim()
                        )));
                    }
                }
                require_full_domain(phi)?;
            }
        }
        let node = match node {
            NdNegNode::StrongFromAuto { phi, .. } => NdNegNode::StrongFromAuto { phi, n: None },
            other => other,
        };
        Ok(Self { node })
    }

    pub fn representable(negs: Vec<UnitNegation>) -> Result<Self> {
        Self::new(NdNegNode::Representable { negs })
    }

    /// `Ñ`: the same negation in every component.
    pub fn tilde(neg: UnitNegation, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("dimension must be at least 1".into()));
        }
        Self::representable(vec![neg; n])
    }

    pub fn collapse(inner: UnitNegation, n: usize) -> Result<Self> {
        Self::new(NdNegNode::Collapse { inner, n })
    }

    pub fn bottom(n: usize) -> Result<Self> {
        Self::new(NdNegNode::BottomN { n })
    }

    pub fn top(n: usize) -> Result<Self> {
        Self::new(NdNegNode::TopN { n })
    }

    /// `𝒩_S(x) = (1 − πₙ(x), …, 1 − π₁(x))`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::strong_from_auto(NDimAutomorphism::identity(n)?)
    }

    pub fn conjugate(inner: NDimNegation, by: NDimAutomorphism) -> Result<Self> {
        Self::new(NdNegNode::ConjugateN {
            inner: Box::new(inner),
            by,
        })
    }

    pub fn strong_from_auto(phi: NDimAutomorphism) -> Result<Self> {
        Self::new(NdNegNode::StrongFromAuto { phi, n: None })
    }

    pub fn node(&self) -> &NdNegNode {
        &self.node
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expressions serialize")
    }

    pub fn dim(&self) -> usize {
        match &self.node {
            NdNegNode::Representable { negs } => negs.len(),
            NdNegNode::Collapse { n, .. } | NdNegNode::BottomN { n } | NdNegNode::TopN { n } => *n,
            NdNegNode::ConjugateN { inner, .. } => inner.dim(),
            NdNegNode::StrongFromAuto { phi, .. } => phi.dim(),
        }
    }

    /// False for kinds built on a jump (`𝒩_⊥`, `𝒩_⊤`, jumping unary parts).
    pub fn is_continuous_kind(&self) -> bool {
        match &self.node {
            NdNegNode::Representable { negs } => negs.iter().all(UnitNegation::is_continuous_kind),
            NdNegNode::Collapse { inner, .. } => inner.is_continuous_kind(),
            NdNegNode::BottomN { .. } | NdNegNode::TopN { .. } => false,
            NdNegNode::ConjugateN { inner, .. } => inner.is_continuous_kind(),
            NdNegNode::StrongFromAuto { .. } => true,
        }
    }

    /// Evaluates at `x ∈ L_n([0,1])`.
    pub fn eval<T: Scalar>(&self, x: &NDInterval<T>) -> Result<NDInterval<T>> {
        if x.dim() != self.dim() {
            return Err(Error::Argument(format!(
                "dimension mismatch: negation on L_{}, point in L_{}",
                self.dim(),
                x.dim()
            )));
        }
        NDInterval::from_computed(self.apply(x.values()))
    }

    /// Raw evaluation on a tuple assumed to lie in `L_n([0,1])`.
    pub fn apply<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        let n = x.len();
        match &self.node {
            NdNegNode::Representable { negs } => (0..n).map(|i| negs[i].eval(x[n - 1 - i])).collect(),
            NdNegNode::Collapse { inner, .. } => vec![inner.eval(x[n - 1]); n],
            NdNegNode::BottomN { .. } => {
                let v = if x.iter().all(|&c| c == T::zero()) { T::one() } else { T::zero() };
                vec![v; n]
            }
            NdNegNode::TopN { .. } => {
                let v = if x.iter().all(|&c| c == T::one()) { T::zero() } else { T::one() };
                vec![v; n]
            }
            NdNegNode::ConjugateN { inner, by } => by.apply_inverse(&inner.apply(&by.apply(x))),
            NdNegNode::StrongFromAuto { phi, .. } => {
                let y = phi.apply(x);
                let s: Vec<T> = y.iter().rev().map(|&c| T::one() - c).collect();
                phi.apply_inverse(&s)
            }
        }
    }

    fn tabulate(&self, grid: &SimplexGrid<f64>) -> Vec<Vec<f64>> {
        grid.points().par_iter().map(|p| self.apply(p.values())).collect()
    }

    fn grid(&self, m: usize) -> SimplexGrid<f64> {
        SimplexGrid::new(self.dim(), m.max(2)).expect("dimension is positive")
    }

    /// `N_i(x) = π_i(𝒩(/x/))`, evaluated directly.
    pub fn induced_at(&self, i: usize, x: f64) -> f64 {
        self.apply(&vec![x; self.dim()])[i - 1]
    }

    /// Induced negations tabulated on the `m`-point grid: `table[i][k] = π_{i+1}(𝒩(/k/(m−1)/))`.
    pub fn induced_table(&self, m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
        let xs = unit_grid::<f64>(m.max(2));
        let n = self.dim();
        let rows: Vec<Vec<f64>> = xs.par_iter().map(|&x| self.apply(&vec![x; n])).collect();
        let table = (0..n).map(|i| rows.iter().map(|r| r[i]).collect()).collect();
        (xs, table)
    }

    /// Induced negations as piecewise-linear expressions through the `m`-point
    /// tabulation. Rounding-level defects (≤ 1e-12) are repaired; anything
    /// larger means the expression does not induce negations.
    pub fn induced_negations(&self, m: usize) -> Result<Vec<UnitNegation>> {
        let (xs, table) = self.induced_table(m);
        table
            .into_iter()
            .enumerate()
            .map(|(i, mut ys)| {
                let last = ys.len() - 1;
                for (k, target) in [(0, 1.0), (last, 0.0)] {
                    if (ys[k] - target).abs() > f64::slack() {
                        return Err(Error::Precondition(format!(
                            "induced negation {} takes {} at {}",
                            i + 1,
                            ys[k],
                            xs[k]
                        )));
                    }
                    ys[k] = target;
                }
                for k in 1..ys.len() {
                    if ys[k] > ys[k - 1] {
                        if ys[k] - ys[k - 1] > f64::slack() {
                            return Err(Error::Precondition(format!(
                                "induced negation {} increases between {} and {}",
                                i + 1,
                                xs[k - 1],
                                xs[k]
                            )));
                        }
                        ys[k] = ys[k - 1];
                    }
                }
                UnitNegation::pwl(xs.iter().copied().zip(ys).collect())
            })
            .collect()
    }

    /// N1 exactly at the extremes and antitonicity on all grid pairs.
    pub fn check_nd_axioms(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let report = PropertyReport::new("nd.axioms", n, m, EPS);
        let at0 = self.apply(&vec![0.0f64; n]);
        let at1 = self.apply(&vec![1.0f64; n]);
        if at0.iter().any(|&v| v != 1.0) || at1.iter().any(|&v| v != 0.0) {
            return report.fail(json!({"image_of_0": at0, "image_of_1": at1})).timed(start);
        }
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);
        let s = scan::pairs(pts.len(), 0, |a, b| {
            if a == b || !leq_tol(pts[a].values(), pts[b].values(), 0.0) {
                return Check::Skip;
            }
            let excess = excess_over(&outs[b], &outs[a]);
            if excess > EPS {
                Check::Fail(excess)
            } else {
                Check::Ok(excess)
            }
        });
        report
            .absorb(&s, |a, b| {
                json!({"x": pts[a], "y": pts[b], "n_x": outs[a], "n_y": outs[b]})
            })
            .timed(start)
    }

    /// `𝒩(x) ⊆_i 𝒩(y)` whenever `x ⊆_{n−i} y`, for one `i`.
    pub fn is_subset_monotone_i(&self, i: usize, m: usize) -> Result<PropertyReport> {
        let n = self.dim();
        if i == 0 || i >= n {
            return Err(Error::Argument(format!("index {i} outside 1..={}", n.saturating_sub(1))));
        }
        Ok(self.subset_monotone_report(&[i], m, format!("nd.subset_monotone_{i}")))
    }

    /// `⊆`-monotonicity for every `i = 1, …, n−1`.
    pub fn is_subset_monotone(&self, m: usize) -> PropertyReport {
        let is: Vec<usize> = (1..self.dim()).collect();
        self.subset_monotone_report(&is, m, "nd.subset_monotone".into())
    }

    fn subset_monotone_report(&self, is: &[usize], m: usize, id: String) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let report = PropertyReport::new(id, n, m, EPS);
        if is.is_empty() {
            return report.with_note("vacuous for n = 1").timed(start);
        }
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);
        let violation = |a: usize, b: usize| -> Option<(f64, usize)> {
            let (x, y) = (pts[a].values(), pts[b].values());
            let mut worst: Option<(f64, usize)> = None;
            for &i in is {
                if subset_tol(x, y, n - i, 0.0) {
                    let e = subset_excess(&outs[a], &outs[b], i);
                    if worst.is_none_or(|(w, _)| e > w) {
                        worst = Some((e, i));
                    }
                }
            }
            worst
        };
        let s = scan::pairs(pts.len(), 0, |a, b| match violation(a, b) {
            None => Check::Skip,
            Some((e, _)) if e > EPS => Check::Fail(e),
            Some((e, _)) => Check::Ok(e),
        });
        report
            .absorb(&s, |a, b| {
                let i = violation(a, b).map(|(_, i)| i).unwrap_or(0);
                json!({"x": pts[a], "y": pts[b], "i": i, "n_x": outs[a], "n_y": outs[b]})
            })
            .timed(start)
    }

    /// `π_i(𝒩(x)) ≤ π_i(𝒩(y))` whenever `π_{n−i+1}(x) ≥ π_{n−i+1}(y)`.
    pub fn is_monotone_by_part(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);
        let violation = |a: usize, b: usize| -> Option<(f64, usize)> {
            let (x, y) = (pts[a].values(), pts[b].values());
            let mut worst: Option<(f64, usize)> = None;
            for i in 1..=n {
                if x[n - i] >= y[n - i] {
                    let e = (outs[a][i - 1] - outs[b][i - 1]).max(0.0);
                    if worst.is_none_or(|(w, _)| e > w) {
                        worst = Some((e, i));
                    }
                }
            }
            worst
        };
        let s = scan::pairs(pts.len(), 0, |a, b| match violation(a, b) {
            None => Check::Skip,
            Some((e, _)) if e > EPS => Check::Fail(e),
            Some((e, _)) => Check::Ok(e),
        });
        PropertyReport::new("nd.monotone_by_part", n, m, EPS)
            .absorb(&s, |a, b| {
                let i = violation(a, b).map(|(_, i)| i).unwrap_or(0);
                json!({"x": pts[a], "y": pts[b], "i": i, "n_x": outs[a], "n_y": outs[b]})
            })
            .timed(start)
    }

    /// Decides representability twice: by the `⊆`-monotone sampler and by
    /// extracting the induced negations and reconstructing `𝒩` from them.
    pub fn decide_representability(&self, m: usize) -> RepresentabilityVerdict {
        let m = m.max(2);
        let n = self.dim();
        let monotone = self.is_subset_monotone(m);
        let (_, table) = self.induced_table(m);
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);

        let mut stage_witness = extracted_defect(&table, m);
        let step = (m - 1) as f64;
        let errors: Vec<f64> = pts
            .par_iter()
            .zip(outs.par_iter())
            .map(|(p, out)| {
                let x = p.values();
                (0..n)
                    .map(|i| {
                        let k = (x[n - 1 - i] * step).round() as usize;
                        (table[i][k] - out[i]).abs()
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let max_err = errors.iter().copied().fold(0.0f64, f64::max);
        if stage_witness.is_none() {
            if let Some(k) = errors.iter().position(|&e| e > RECON_TOL) {
                let x = pts[k].values();
                let recon: Vec<f64> = (0..n)
                    .map(|i| table[i][(x[n - 1 - i] * step).round() as usize])
                    .collect();
                stage_witness = Some(json!({
                    "stage": "reconstruction",
                    "x": pts[k],
                    "n_x": outs[k],
                    "reconstructed": recon,
                    "error": errors[k],
                }));
            }
        }
        let subset_monotone = monotone.passed();
        let reconstructs = stage_witness.is_none();
        let witness = if !subset_monotone {
            monotone.witness.clone()
        } else {
            stage_witness
        };
        RepresentabilityVerdict {
            representable: subset_monotone && reconstructs,
            subset_monotone,
            reconstructs,
            consistent: subset_monotone == reconstructs,
            extracted: reconstructs.then_some(table),
            max_reconstruction_error: max_err,
            witness,
            pairs_tested: monotone.pairs_tested,
            grid: GridSpec { n, m },
        }
    }

    /// N3 sampled: `‖𝒩(𝒩(x)) − x‖∞ ≤ ε` on every grid point.
    pub fn is_strong_nd(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let grid = self.grid(m);
        let pts = grid.points();
        let s = scan::points(pts.len(), |k| {
            let x = pts[k].values();
            let err = sup_dist(&self.apply(&self.apply(x)), x);
            if err <= EPS {
                Check::Ok(err)
            } else {
                Check::Fail(err)
            }
        });
        PropertyReport::new("nd.strong", self.dim(), m, EPS)
            .absorb(&s, |k, _| {
                let x = pts[k].values();
                json!({"x": pts[k], "n_x": self.apply(x), "n_n_x": self.apply(&self.apply(x))})
            })
            .timed(start)
    }

    /// Strict decrease on comparable grid pairs plus the discontinuity
    /// heuristic; a pass means "consistent with strict at resolution m".
    pub fn is_strict_nd(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);
        let s = scan::pairs(pts.len(), 0, |a, b| {
            if a == b || !leq_tol(pts[a].values(), pts[b].values(), 0.0) {
                return Check::Skip;
            }
            let rise = excess_over(&outs[b], &outs[a]);
            let drop = outs[a]
                .iter()
                .zip(&outs[b])
                .fold(f64::NEG_INFINITY, |acc, (p, q)| acc.max(p - q));
            if rise > EPS || drop <= 0.0 {
                Check::Fail(rise.max(-drop))
            } else {
                Check::Ok(rise)
            }
        });
        let report = PropertyReport::new("nd.strict", n, m, EPS)
            .with_note(format!("consistent with strict at resolution {m}"))
            .absorb(&s, |a, b| {
                json!({"x": pts[a], "y": pts[b], "n_x": outs[a], "n_y": outs[b]})
            });
        if !report.passed() {
            return report.timed(start);
        }
        report.merge([self.discontinuity(continuity_base(n, m), DEFAULT_LEVELS)]).timed(start)
    }

    /// Refinement scan for jumps of `𝒩 ∘ sort_to_simplex`.
    pub fn discontinuity(&self, m: usize, levels: usize) -> PropertyReport {
        continuity::discontinuity_scan(self.dim(), m, levels, |t| Some(self.apply(t)))
    }

    /// DP: `𝒩(/x/)` is degenerate (spread ≤ ε) for every grid diagonal.
    pub fn check_dp(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let xs = unit_grid::<f64>(m.max(2));
        let s = scan::points(xs.len(), |k| {
            let spread = spread_of(&self.apply(&vec![xs[k]; n]));
            if spread <= EPS {
                Check::Ok(spread)
            } else {
                Check::Fail(spread)
            }
        });
        PropertyReport::new("nd.dp", n, m, EPS)
            .absorb(&s, |k, _| json!({"x": xs[k], "image": self.apply(&vec![xs[k]; n])}))
            .timed(start)
    }

    /// All induced negations agree within [`RECON_TOL`] on the grid.
    pub fn check_induced_equal(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let (xs, table) = self.induced_table(m);
        let s = scan::points(xs.len(), |k| {
            let col: Vec<f64> = table.iter().map(|row| row[k]).collect();
            let spread = spread_of(&col);
            if spread <= RECON_TOL {
                Check::Ok(spread)
            } else {
                Check::Fail(spread)
            }
        });
        PropertyReport::new("nd.induced_equal", self.dim(), m, RECON_TOL)
            .absorb(&s, |k, _| {
                json!({"x": xs[k], "values": table.iter().map(|r| r[k]).collect::<Vec<_>>()})
            })
            .timed(start)
    }

    /// `𝒩 = Ñ` with `N = N₁`, the first induced negation, evaluated directly.
    pub fn check_equals_tilde_induced(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let grid = self.grid(m);
        let pts = grid.points();
        let tilde = |x: &[f64]| -> Vec<f64> { (0..n).map(|i| self.induced_at(1, x[n - 1 - i])).collect() };
        let s = scan::points(pts.len(), |k| {
            let x = pts[k].values();
            let err = sup_dist(&self.apply(x), &tilde(x));
            if err <= RECON_TOL {
                Check::Ok(err)
            } else {
                Check::Fail(err)
            }
        });
        PropertyReport::new("nd.equals_tilde", n, m, RECON_TOL)
            .absorb(&s, |k, _| {
                let x = pts[k].values();
                json!({"x": pts[k], "n_x": self.apply(x), "tilde_x": tilde(x)})
            })
            .timed(start)
    }

    /// A strong negation maps non-degenerate points to non-degenerate points;
    /// the corners `(0^{(j)}, 1^{(n−j)})` are checked explicitly as well.
    pub fn no_degenerate_image(&self, m: usize) -> Result<PropertyReport> {
        self.require_strong(m)?;
        let start = Instant::now();
        let n = self.dim();
        let grid = self.grid(m);
        let pts = grid.points();
        let check = |x: &[f64]| {
            if spread_of(x) == 0.0 {
                return Check::Skip;
            }
            let spread = spread_of(&self.apply(x));
            if spread > EPS {
                Check::Ok(0.0)
            } else {
                Check::Fail(EPS - spread)
            }
        };
        let s = scan::points(pts.len(), |k| check(pts[k].values()));
        let corners: Vec<Vec<f64>> = (1..n)
            .map(|j| (0..n).map(|c| if c < j { 0.0 } else { 1.0 }).collect())
            .collect();
        let c = scan::points(corners.len(), |k| check(&corners[k]));
        let corner_report = PropertyReport::new("nd.no_degenerate_image.corners", n, 2, EPS)
            .absorb(&c, |k, _| json!({"x": corners[k], "image": self.apply(&corners[k])}));
        Ok(PropertyReport::new("nd.no_degenerate_image", n, m, EPS)
            .absorb(&s, |k, _| {
                json!({"x": pts[k], "image": self.apply(pts[k].values())})
            })
            .merge([corner_report])
            .timed(start))
    }

    /// For strong `𝒩`: `𝒩(x) = /1/` iff `x = /0/`, `𝒩(x) = /0/` iff `x = /1/`,
    /// `𝒩(x ∨ y) = 𝒩(x) ∧ 𝒩(y)` and `𝒩(x ∧ y) = 𝒩(x) ∨ 𝒩(y)` on all grid pairs.
    pub fn lattice_duality(&self, m: usize) -> Result<PropertyReport> {
        self.require_strong(m)?;
        let start = Instant::now();
        let n = self.dim();
        let grid = self.grid(m);
        let pts = grid.points();
        let outs = self.tabulate(&grid);
        let extremes = scan::points(pts.len(), |k| {
            let x = pts[k].values();
            let out = &outs[k];
            let is_zero = x.iter().all(|&v| v == 0.0);
            let is_one = x.iter().all(|&v| v == 1.0);
            let maps_to_one = out.iter().all(|&v| (v - 1.0).abs() <= EPS);
            let maps_to_zero = out.iter().all(|&v| v.abs() <= EPS);
            if is_zero == maps_to_one && is_one == maps_to_zero {
                Check::Ok(0.0)
            } else {
                Check::Fail(1.0)
            }
        });
        let extremes_report = PropertyReport::new("nd.lattice_duality.extremes", n, m, EPS)
            .absorb(&extremes, |k, _| json!({"x": pts[k], "n_x": outs[k]}));
        let deviation = |a: usize, b: usize| -> (f64, f64) {
            let (x, y) = (pts[a].values(), pts[b].values());
            let join: Vec<f64> = x.iter().zip(y).map(|(p, q)| p.max(*q)).collect();
            let meet: Vec<f64> = x.iter().zip(y).map(|(p, q)| p.min(*q)).collect();
            let out_meet: Vec<f64> = outs[a].iter().zip(&outs[b]).map(|(p, q)| p.min(*q)).collect();
            let out_join: Vec<f64> = outs[a].iter().zip(&outs[b]).map(|(p, q)| p.max(*q)).collect();
            (
                sup_dist(&self.apply(&join), &out_meet),
                sup_dist(&self.apply(&meet), &out_join),
            )
        };
        let s = scan::pairs(pts.len(), 0, |a, b| {
            if b < a {
                return Check::Skip;
            }
            let (d1, d2) = deviation(a, b);
            let e = d1.max(d2);
            if e <= EPS {
                Check::Ok(e)
            } else {
                Check::Fail(e)
            }
        });
        Ok(PropertyReport::new("nd.lattice_duality", n, m, EPS)
            .absorb(&s, |a, b| {
                let (d_join, d_meet) = deviation(a, b);
                json!({"x": pts[a], "y": pts[b], "join_deviation": d_join, "meet_deviation": d_meet})
            })
            .merge([extremes_report])
            .timed(start))
    }

    /// `𝒩₁ ⪯ 𝒩₂`: `𝒩₁(x) ≤ 𝒩₂(x)` on every grid point, with slack ε.
    pub fn preceq(&self, other: &NDimNegation, m: usize) -> Result<PropertyReport> {
        if self.dim() != other.dim() {
            return Err(Error::Argument(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        let start = Instant::now();
        let grid = self.grid(m);
        let pts = grid.points();
        let s = scan::points(pts.len(), |k| {
            let x = pts[k].values();
            let excess = excess_over(&self.apply(x), &other.apply(x));
            if excess > EPS {
                Check::Fail(excess)
            } else {
                Check::Ok(excess)
            }
        });
        Ok(PropertyReport::new("nd.preceq", self.dim(), m, EPS)
            .absorb(&s, |k, _| {
                let x = pts[k].values();
                json!({"x": pts[k], "lhs": self.apply(x), "rhs": other.apply(x)})
            })
            .timed(start))
    }

    /// Equilibrium point among the structured candidates: the tuple of
    /// per-component equilibria for a representable negation with distinct
    /// components, the diagonal `/e/` otherwise. The candidate is accepted
    /// only if `‖𝒩(e) − e‖∞ ≤ tol`.
    pub fn nd_equilibrium(&self, tol: f64) -> EquilibriumResult<NDInterval<f64>> {
        let n = self.dim();
        if !self.is_continuous_kind() {
            return EquilibriumResult {
                kind: EquilibriumKind::None,
                residual: f64::NAN,
                iterations: 0,
                diagnostic: Some("negation has a jump and no fixed point".into()),
            };
        }
        let undetermined = |residual: f64, iterations: usize, why: String| EquilibriumResult {
            kind: EquilibriumKind::Undetermined,
            residual,
            iterations,
            diagnostic: Some(why),
        };
        let (candidate, iterations) = match &self.node {
            NdNegNode::Representable { negs } if negs.windows(2).any(|w| w[0] != w[1]) => {
                let mut es = Vec::with_capacity(n);
                let mut iterations = 0;
                for (i, neg) in negs.iter().enumerate() {
                    let r = neg.equilibrium(tol);
                    iterations += r.iterations;
                    match r.kind {
                        EquilibriumKind::Point(e) => es.push(e),
                        _ => {
                            return undetermined(
                                r.residual,
                                iterations,
                                format!("component negation {} has no equilibrium", i + 1),
                            )
                        }
                    }
                }
                if es.windows(2).any(|w| w[0] > w[1]) {
                    return undetermined(
                        f64::NAN,
                        iterations,
                        format!("per-component equilibria {es:?} are not nondecreasing"),
                    );
                }
                (es, iterations)
            }
            _ => {
                let fp = fixed_point_decreasing(|t: f64| self.induced_at(1, t), tol, DEFAULT_MAX_ITER);
                if !fp.converged {
                    return undetermined(
                        fp.residual,
                        fp.iterations,
                        format!("diagonal bisection stalled at {} with residual {}", fp.point, fp.residual),
                    );
                }
                (vec![fp.point; n], fp.iterations)
            }
        };
        let image = self.apply(&candidate);
        let residual = sup_dist(&image, &candidate);
        if residual > tol {
            return undetermined(
                residual,
                iterations,
                format!("candidate {candidate:?} maps to {image:?}; residual {residual} exceeds {tol}"),
            );
        }
        match NDInterval::from_computed(candidate) {
            Ok(e) => EquilibriumResult {
                kind: EquilibriumKind::Point(e),
                residual,
                iterations,
                diagnostic: None,
            },
            Err(err) => undetermined(residual, iterations, err.to_string()),
        }
    }

    fn require_strong(&self, m: usize) -> Result<()> {
        let r = self.is_strong_nd(m);
        if r.passed() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "negation is not strong at resolution {m}: {}",
                r.witness.map(|w| w.to_string()).unwrap_or_default()
            )))
        }
    }
}

/// Outcome of [`NDimNegation::decide_representability`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentabilityVerdict {
    pub representable: bool,
    /// Verdict of the `⊆`-monotone sampler.
    pub subset_monotone: bool,
    /// Verdict of extraction, chain and reconstruction checks.
    pub reconstructs: bool,
    /// Whether both routes agree, as they must for a correct implementation.
    pub consistent: bool,
    /// Induced negations on the `m`-point grid, present when reconstruction succeeds.
    pub extracted: Option<Vec<Vec<f64>>>,
    pub max_reconstruction_error: f64,
    pub witness: Option<Value>,
    pub pairs_tested: u64,
    pub grid: GridSpec,
}

impl RepresentabilityVerdict {
    pub fn to_report(&self) -> PropertyReport {
        let mut r = PropertyReport::new("nd.representable", self.grid.n, self.grid.m, RECON_TOL);
        r.pairs_tested = self.pairs_tested;
        r.max_error = self.max_reconstruction_error;
        if !self.consistent {
            return r.fail(json!({
                "inconsistent": true,
                "subset_monotone": self.subset_monotone,
                "reconstructs": self.reconstructs,
                "witness": self.witness,
            }));
        }
        if self.representable {
            r
        } else {
            r.fail(self.witness.clone().unwrap_or(Value::Null))
        }
    }
}

fn validate_chain(negs: &[UnitNegation]) -> Result<()> {
    if negs.is_empty() {
        return Err(Error::Argument("representable negation needs at least one component".into()));
    }
    let xs = unit_grid::<f64>(CHAIN_CHECK_M);
    for (i, w) in negs.windows(2).enumerate() {
        if let Some(&x) = xs.iter().find(|&&x| w[0].eval(x) > w[1].eval(x) + EPS) {
            return Err(Error::Precondition(format!(
                "components are not ordered: N{}({x}) = {} > N{}({x}) = {}",
                i + 1,
                w[0].eval(x),
                i + 2,
                w[1].eval(x)
            )));
        }
    }
    Ok(())
}

fn require_full_domain(phi: &NDimAutomorphism) -> Result<()> {
    if phi.domain_hi() != 1.0 {
        return Err(Error::Argument(format!(
            "automorphism must act on L_n([0,1]), got L_n([0,{}])",
            phi.domain_hi()
        )));
    }
    Ok(())
}

/// Checks (b) and (c) of the representability decider on a tabulation:
/// N1 and N2 for every row, then the chain `N₁ ≤ … ≤ Nₙ`.
fn extracted_defect(table: &[Vec<f64>], m: usize) -> Option<Value> {
    let xs = unit_grid::<f64>(m);
    for (i, row) in table.iter().enumerate() {
        let last = row.len() - 1;
        if (row[0] - 1.0).abs() > EPS || row[last].abs() > EPS {
            return Some(json!({"stage": "n1", "negation": i + 1, "at_0": row[0], "at_1": row[last]}));
        }
        for a in 0..row.len() {
            for b in a + 1..row.len() {
                if row[b] > row[a] + EPS {
                    return Some(json!({
                        "stage": "n2", "negation": i + 1, "x": xs[a], "y": xs[b],
                        "n_x": row[a], "n_y": row[b],
                    }));
                }
            }
        }
    }
    for (i, w) in table.windows(2).enumerate() {
        if let Some(k) = (0..w[0].len()).find(|&k| w[0][k] > w[1][k] + EPS) {
            return Some(json!({
                "stage": "chain", "negation": i + 1, "x": xs[k],
                "lower": w[0][k], "upper": w[1][k],
            }));
        }
    }
    None
}

/// How far `a ⊆_i b` (1-based `i`) is from holding; 0 when it holds.
fn subset_excess(a: &[f64], b: &[f64], i: usize) -> f64 {
    (b[i - 1] - a[i - 1])
        .max(a[i - 1] - a[i])
        .max(a[i] - b[i])
        .max(0.0)
}

/// Largest amount by which `a` exceeds `b` in some component; 0 when `a ≤ b`.
fn excess_over(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (p, q)| acc.max(p - q))
}

fn spread_of(v: &[f64]) -> f64 {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    hi - lo
}

/// Base resolution for the refinement scan, shrinking with the dimension so
/// the finest cube grid stays around 10⁵ points.
pub fn continuity_base(n: usize, m: usize) -> usize {
    let cap = match n {
        1 => 41,
        2 => 11,
        3 => 6,
        _ => 3,
    };
    m.clamp(2, cap)
}
