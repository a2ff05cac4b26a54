//! Fuzzy negations on `[0,1]`.
//!
//! A [`UnitNegation`] is a validated expression tree over a small catalog
//! (`N_S`, `N_⊥`, `N_⊤`, `C_k`, `C^k`, piecewise-linear) closed under
//! conjugation by automorphisms. Validation happens once, at construction or
//! deserialization; evaluation never fails.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::scalar::{clamp_unit, Scalar};
use crate::simplex::unit_grid;
use crate::solve::{fixed_point_decreasing, DEFAULT_MAX_ITER};
use crate::unit_automorphism::UnitAutomorphism;
use crate::verify::continuity;
use crate::verify::scan::{self, Check};
use crate::verify::{PropertyReport, EPS};

/// Expression node kinds. Wrapped by [`UnitNegation`], which enforces the invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NegNode {
    /// `N_S(x) = 1 − x`
    Standard,
    /// `N_⊥`: 1 at 0, 0 elsewhere.
    Bottom,
    /// `N_⊤`: 0 at 1, 1 elsewhere.
    Top,
    /// `C_k(x) = (1 − x^{n−k+1})^{1/(n−k+1)}`, `1 ≤ k ≤ n`.
    Ck { n: u32, k: u32 },
    /// `C^k(x) = 1 − x^k`.
    #[serde(rename = "cupk")]
    CupK { k: u32 },
    /// Linear interpolation through `(x, y)` control points.
    Pwl { points: Vec<(f64, f64)> },
    /// `ρ⁻¹ ∘ N ∘ ρ`.
    Conjugate {
        inner: Box<UnitNegation>,
        by: UnitAutomorphism,
    },
    /// `ψ⁻¹(1 − ψ(x))`: strong by construction.
    FromAutomorphism { psi: UnitAutomorphism },
}

/// A validated fuzzy negation expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NegNode", into = "NegNode")]
pub struct UnitNegation {
    node: NegNode,
}

impl TryFrom<NegNode> for UnitNegation {
    type Error = Error;

    fn try_from(node: NegNode) -> Result<Self> {
        Self::new(node)
    }
}

impl From<UnitNegation> for NegNode {
    fn from(n: UnitNegation) -> Self {
        n.node
    }
}

impl UnitNegation {
    pub fn new(node: NegNode) -> Result<Self> {
        match &node {
            NegNode::Ck { n, k } => {
                if *k < 1 || k > n {
                    return Err(Error::Argument(format!("C_k requires 1 ≤ k ≤ n, got n={n}, k={k}")));
                }
            }
            NegNode::CupK { k } => {
                // k = 1 (the standard negation) is accepted alongside k ≥ 2.
                if *k < 1 {
                    return Err(Error::Argument("C^k requires k ≥ 1".into()));
                }
            }
            NegNode::Pwl { points } => validate_pwl_negation(points)?,
            NegNode::Conjugate { by, .. } => require_unit_domain(by, "conjugating automorphism")?,
            NegNode::FromAutomorphism { psi } => require_unit_domain(psi, "generator")?,
            NegNode::Standard | NegNode::Bottom | NegNode::Top => {}
        }
        Ok(Self { node })
    }

    pub fn standard() -> Self {
        Self { node: NegNode::Standard }
    }

    pub fn bottom() -> Self {
        Self { node: NegNode::Bottom }
    }

    pub fn top() -> Self {
        Self { node: NegNode::Top }
    }

    pub fn ck(n: u32, k: u32) -> Result<Self> {
        Self::new(NegNode::Ck { n, k })
    }

    pub fn cupk(k: u32) -> Result<Self> {
        Self::new(NegNode::CupK { k })
    }

    pub fn pwl(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(NegNode::Pwl { points })
    }

    pub fn conjugate(inner: UnitNegation, by: UnitAutomorphism) -> Result<Self> {
        Self::new(NegNode::Conjugate {
            inner: Box::new(inner),
            by,
        })
    }

    pub fn from_automorphism(psi: UnitAutomorphism) -> Result<Self> {
        Self::new(NegNode::FromAutomorphism { psi })
    }

    pub fn node(&self) -> &NegNode {
        &self.node
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expressions serialize")
    }

    /// Evaluates at `x ∈ [0,1]` (inputs are clamped; outputs land in `[0,1]`).
    pub fn eval<T: Scalar>(&self, x: T) -> T {
        let x = clamp_unit(x, T::zero(), T::one());
        let v = match &self.node {
            NegNode::Standard => T::one() - x,
            NegNode::Bottom => {
                if x > T::zero() {
                    T::zero()
                } else {
                    T::one()
                }
            }
            NegNode::Top => {
                if x < T::one() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            NegNode::Ck { n, k } => {
                let q = (n - k + 1) as i32;
                if q == 1 {
                    T::one() - x
                } else {
                    (T::one() - x.powi(q)).max(T::zero()).powf(T::one() / T::lit(q as f64))
                }
            }
            NegNode::CupK { k } => T::one() - x.powi(*k as i32),
            NegNode::Pwl { points } => interpolate(points, x),
            NegNode::Conjugate { inner, by } => by.apply_inverse(inner.eval(by.apply(x))),
            NegNode::FromAutomorphism { psi } => psi.apply_inverse(T::one() - psi.apply(x)),
        };
        clamp_unit(v, T::zero(), T::one())
    }

    /// False for kinds with a jump (`N_⊥`, `N_⊤` and their conjugates).
    pub fn is_continuous_kind(&self) -> bool {
        match &self.node {
            NegNode::Bottom | NegNode::Top => false,
            NegNode::Conjugate { inner, .. } => inner.is_continuous_kind(),
            _ => true,
        }
    }

    /// N1: `N(0) = 1` and `N(1) = 0`, exactly.
    pub fn check_n1(&self) -> PropertyReport {
        let start = Instant::now();
        let (at0, at1) = (self.eval(0.0f64), self.eval(1.0f64));
        let report = PropertyReport::new("unit.n1", 1, 2, 0.0);
        let report = PropertyReport {
            pairs_tested: 2,
            max_error: (1.0 - at0).abs().max(at1.abs()),
            ..report
        };
        if at0 == 1.0 && at1 == 0.0 {
            report.timed(start)
        } else {
            report.fail(json!({"n_at_0": at0, "n_at_1": at1})).timed(start)
        }
    }

    /// N2: antitone on every ordered pair of the `m`-point grid, with slack ε.
    pub fn check_n2(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let xs = unit_grid::<f64>(m.max(2));
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        let s = scan::pairs(xs.len(), 0, |i, j| {
            if i >= j {
                return Check::Skip;
            }
            let rise = ys[j] - ys[i];
            if rise > EPS {
                Check::Fail(rise)
            } else {
                Check::Ok(rise.max(0.0))
            }
        });
        PropertyReport::new("unit.n2", 1, m, EPS)
            .absorb(&s, |i, j| json!({"x": xs[i], "y": xs[j], "n_x": ys[i], "n_y": ys[j]}))
            .timed(start)
    }

    /// N3 sampled: `|N(N(x)) − x| ≤ ε` on the grid.
    pub fn is_strong(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let xs = unit_grid::<f64>(m.max(2));
        let s = scan::points(xs.len(), |i| {
            let err = (self.eval(self.eval(xs[i])) - xs[i]).abs();
            if err <= EPS {
                Check::Ok(err)
            } else {
                Check::Fail(err)
            }
        });
        PropertyReport::new("unit.strong", 1, m, EPS)
            .absorb(&s, |i, _| {
                let x = xs[i];
                json!({"x": x, "n_x": self.eval(x), "n_n_x": self.eval(self.eval(x))})
            })
            .timed(start)
    }

    /// N4 sampled: strict decrease between adjacent grid points plus the
    /// discontinuity heuristic. A pass means "consistent with strict at resolution m".
    pub fn is_strict(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let xs = unit_grid::<f64>(m.max(2));
        let ys: Vec<f64> = xs.iter().map(|&x| self.eval(x)).collect();
        let s = scan::points(xs.len() - 1, |i| {
            let drop = ys[i] - ys[i + 1];
            if drop > 0.0 {
                Check::Ok(0.0)
            } else {
                Check::Fail(-drop)
            }
        });
        let report = PropertyReport::new("unit.strict", 1, m, 0.0)
            .with_note(format!("consistent with strict at resolution {m}"))
            .absorb(&s, |i, _| {
                json!({"x": xs[i], "y": xs[i + 1], "n_x": ys[i], "n_y": ys[i + 1]})
            });
        if !report.passed() {
            return report.timed(start);
        }
        let jump = continuity::discontinuity_scan(1, m.clamp(2, 41), continuity::DEFAULT_LEVELS, |t| {
            Some(vec![self.eval(t[0])])
        });
        report.merge([jump]).timed(start)
    }

    /// Fixed point of the negation by bisection on `N(x) − x`.
    ///
    /// Kinds with a jump have no equilibrium; they are reported as `None`
    /// without trusting the bisection, which would converge onto the jump.
    pub fn equilibrium(&self, tol: f64) -> EquilibriumResult<f64> {
        let fp = fixed_point_decreasing(|x: f64| self.eval(x), tol, DEFAULT_MAX_ITER);
        if !self.is_continuous_kind() {
            return EquilibriumResult {
                kind: EquilibriumKind::None,
                residual: fp.residual,
                iterations: fp.iterations,
                diagnostic: Some("negation has a jump and no fixed point".into()),
            };
        }
        if fp.converged {
            EquilibriumResult {
                kind: EquilibriumKind::Point(fp.point),
                residual: fp.residual,
                iterations: fp.iterations,
                diagnostic: None,
            }
        } else {
            EquilibriumResult {
                kind: EquilibriumKind::Undetermined,
                residual: fp.residual,
                iterations: fp.iterations,
                diagnostic: Some(format!(
                    "bisection stalled at x={} with residual {} > tol {}",
                    fp.point, fp.residual, tol
                )),
            }
        }
    }
}

/// Pointwise order `N₁ ≤ N₂` on the grid, with slack ε.
pub fn neg_leq(lhs: &UnitNegation, rhs: &UnitNegation, m: usize) -> PropertyReport {
    let start = Instant::now();
    let xs = unit_grid::<f64>(m.max(2));
    let s = scan::points(xs.len(), |i| {
        let excess = lhs.eval(xs[i]) - rhs.eval(xs[i]);
        if excess > EPS {
            Check::Fail(excess)
        } else {
            Check::Ok(excess.max(0.0))
        }
    });
    PropertyReport::new("unit.leq", 1, m, EPS)
        .absorb(&s, |i, _| {
            json!({"x": xs[i], "lhs": lhs.eval(xs[i]), "rhs": rhs.eval(xs[i])})
        })
        .timed(start)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquilibriumKind<P> {
    Point(P),
    None,
    Undetermined,
}

/// Outcome of an equilibrium search; `residual` is `|N(e) − e|` (sup norm in
/// higher dimensions) at the returned or best candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult<P> {
    pub kind: EquilibriumKind<P>,
    pub residual: f64,
    pub iterations: usize,
    pub diagnostic: Option<String>,
}

impl<P> EquilibriumResult<P> {
    pub fn point(&self) -> Option<&P> {
        match &self.kind {
            EquilibriumKind::Point(p) => Some(p),
            _ => None,
        }
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn validate_pwl_negation(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::Argument("piecewise-linear negation needs at least two points".into()));
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    if first != (0.0, 1.0) || last != (1.0, 0.0) {
        return Err(Error::Argument(format!(
            "piecewise-linear negation must run from (0,1) to (1,0), got {first:?} .. {last:?}"
        )));
    }
    for (i, w) in points.windows(2).enumerate() {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if !(x0 < x1) {
            return Err(Error::Argument(format!("control x not strictly increasing at point {}", i + 1)));
        }
        if !(y1 <= y0) || !(0.0..=1.0).contains(&y1) {
            return Err(Error::Argument(format!("control y not nonincreasing in [0,1] at point {}", i + 1)));
        }
    }
    Ok(())
}

fn require_unit_domain(a: &UnitAutomorphism, what: &str) -> Result<()> {
    if a.domain_hi() != 1.0 {
        return Err(Error::Argument(format!(
            "{what} must act on [0,1], got domain [0,{}]",
            a.domain_hi()
        )));
    }
    Ok(())
}

/// Linear interpolation through sorted control points; exact at every knot.
pub(crate) fn interpolate<T: Scalar>(points: &[(f64, f64)], x: T) -> T {
    let k = points.partition_point(|p| T::lit(p.0) <= x);
    if k == 0 {
        return T::lit(points[0].1);
    }
    if k == points.len() {
        return T::lit(points[k - 1].1);
    }
    let (x0, y0) = (T::lit(points[k - 1].0), T::lit(points[k - 1].1));
    if x == x0 {
        return y0;
    }
    let (x1, y1) = (T::lit(points[k].0), T::lit(points[k].1));
    y0 + (x - x0) / (x1 - x0) * (y1 - y0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    #[test]
    fn catalog_values() {
        assert_eq!(UnitNegation::standard().eval(0.3), 0.7);
        assert_eq!(UnitNegation::cupk(2).unwrap().eval(0.5), 0.75);
        let c = UnitNegation::ck(3, 1).unwrap();
        let e = 0.5f64.powf(1.0 / 3.0);
        assert!((c.eval(e) - e).abs() < 1e-9);
        assert_eq!(UnitNegation::bottom().eval(0.0001), 0.0);
        assert_eq!(UnitNegation::bottom().eval(0.0), 1.0);
        assert_eq!(UnitNegation::top().eval(0.9999), 1.0);
        assert_eq!(UnitNegation::top().eval(1.0), 0.0);
    }

    #[test]
    fn construction_errors() {
        assert!(UnitNegation::ck(3, 4).is_err());
        assert!(UnitNegation::ck(3, 0).is_err());
        assert!(UnitNegation::cupk(0).is_err());
        assert!(UnitNegation::pwl(vec![(0.0, 1.0), (0.5, 0.6), (0.5, 0.5), (1.0, 0.0)]).is_err());
        assert!(UnitNegation::pwl(vec![(0.0, 1.0), (0.5, 0.4), (0.7, 0.6), (1.0, 0.0)]).is_err());
        assert!(UnitNegation::pwl(vec![(0.0, 0.9), (1.0, 0.0)]).is_err());
        let half = UnitAutomorphism::rescaled(UnitAutomorphism::identity(), 0.5).unwrap();
        assert!(UnitNegation::conjugate(UnitNegation::standard(), half).is_err());
    }

    #[test]
    fn pwl_is_exact_at_knots() {
        let n = UnitNegation::pwl(vec![(0.0, 1.0), (0.4, 0.7), (1.0, 0.0)]).unwrap();
        assert_eq!(n.eval(0.4), 0.7);
        assert_eq!(n.eval(1.0), 0.0);
        assert!((n.eval(0.2f64) - 0.85).abs() < 1e-15);
    }

    #[test]
    fn n1_n2_checks() {
        for n in [UnitNegation::standard(), UnitNegation::top(), UnitNegation::bottom()] {
            assert!(n.check_n1().passed());
            assert!(n.check_n2(41).passed());
        }
    }

    #[test]
    fn n2_witness_on_increasing_segment() {
        // Not a valid negation by construction, so build the node directly.
        let bad = UnitNegation {
            node: NegNode::Pwl {
                points: vec![(0.0, 1.0), (0.3, 0.4), (0.6, 0.6), (1.0, 0.0)],
            },
        };
        let r = bad.check_n2(11);
        assert_eq!(r.verdict, Verdict::Fail);
        // first ordered grid pair with a rise: x = 0.3 (0.4) then 0.4 (~0.4667)
        let w = r.witness.unwrap();
        assert_eq!(w["x"], 0.3);
        assert_eq!(w["y"], 0.4);
    }

    #[test]
    fn strong_and_strict() {
        for (n, k) in [(1, 1), (3, 1), (3, 2), (5, 1), (5, 3)] {
            assert!(UnitNegation::ck(n, k).unwrap().is_strong(41).passed(), "C_{k} n={n}");
        }
        let c2 = UnitNegation::cupk(2).unwrap();
        assert!(c2.is_strict(41).passed());
        let r = c2.is_strong(41);
        assert_eq!(r.verdict, Verdict::Fail);
        // N(N(0.5)) = 1 − 0.75² = 0.4375
        assert!((c2.eval(c2.eval(0.5f64)) - 0.4375).abs() < 1e-15);
        assert!(!UnitNegation::bottom().is_strict(41).passed());
    }

    #[test]
    fn equilibria() {
        let e = UnitNegation::standard().equilibrium(1e-12);
        assert_eq!(e.point(), Some(&0.5));
        let e = UnitNegation::ck(3, 1).unwrap().equilibrium(1e-12);
        assert!((e.point().unwrap() - 0.793700526).abs() < 1e-9);
        assert!(e.residual <= 1e-12);
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        let e = UnitNegation::cupk(2).unwrap().equilibrium(1e-12);
        assert!((e.point().unwrap() - golden).abs() < 1e-9);
        assert_eq!(UnitNegation::bottom().equilibrium(1e-12).kind, EquilibriumKind::None);
        assert_eq!(UnitNegation::top().equilibrium(1e-12).kind, EquilibriumKind::None);
    }

    #[test]
    fn pointwise_order() {
        assert!(neg_leq(&UnitNegation::bottom(), &UnitNegation::standard(), 41).passed());
        assert!(neg_leq(&UnitNegation::standard(), &UnitNegation::top(), 41).passed());
        let r = neg_leq(&UnitNegation::cupk(3).unwrap(), &UnitNegation::cupk(2).unwrap(), 41);
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(neg_leq(&UnitNegation::cupk(2).unwrap(), &UnitNegation::cupk(3).unwrap(), 41).passed());
    }

    #[test]
    fn json_grammar() {
        let n = UnitNegation::from_json(r#"{"kind":"ck","n":3,"k":1}"#).unwrap();
        assert_eq!(n, UnitNegation::ck(3, 1).unwrap());
        let p = UnitNegation::from_json(r#"{"kind":"pwl","points":[[0,1],[0.4,0.7],[1,0]]}"#).unwrap();
        assert_eq!(p.to_json(), r#"{"kind":"pwl","points":[[0.0,1.0],[0.4,0.7],[1.0,0.0]]}"#);
        assert!(UnitNegation::from_json(r#"{"kind":"ck","n":2,"k":3}"#).is_err());
        assert!(UnitNegation::from_json(r#"{"kind":"nope"}"#).is_err());
        let c = UnitNegation::from_json(
            r#"{"kind":"conjugate","inner":{"kind":"standard"},"by":{"kind":"power","p":2.0}}"#,
        )
        .unwrap();
        assert!((c.eval(0.6f64) - 0.8).abs() < 1e-12);
        assert_eq!(UnitNegation::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn f32_evaluation() {
        let c = UnitNegation::cupk(2).unwrap();
        assert_eq!(c.eval(0.5f32), 0.75f32);
    }
}
