//! Automorphisms of `[0,1]` and of `[0,e]`.
//!
//! Every node evaluates to a continuous strictly increasing map fixing both
//! ends of its domain. Inversion uses closed forms where one exists and
//! monotone bisection otherwise; [`UnitAutomorphism::invert_numerically`]
//! always bisects and serves as an independent check on the closed forms.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::scalar::{clamp_unit, Scalar};
use crate::simplex::unit_grid;
use crate::solve::{invert_increasing, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::unit_negation::{interpolate, EquilibriumKind, UnitNegation};
use crate::verify::scan::{self, Check};
use crate::verify::{PropertyReport, EPS, M_POINT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutoNode {
    Identity,
    /// `x ↦ x^p`, `p > 0`.
    Power { p: f64 },
    /// Strictly increasing interpolation from `(0,0)` to `(1,1)`.
    PwlInc { points: Vec<(f64, f64)> },
    /// `outer ∘ inner`; both must share a domain.
    Compose {
        outer: Box<UnitAutomorphism>,
        inner: Box<UnitAutomorphism>,
    },
    Inverse { inner: Box<UnitAutomorphism> },
    /// Automorphism of `[0,e]` obtained as `x ↦ e·a(x/e)`.
    Rescaled { inner: Box<UnitAutomorphism>, e: f64 },
    /// `ρ^N`: `ρ` on `[0,e]`, `N ∘ ρ ∘ N` above `e`, where `e` is the
    /// equilibrium of the strong negation `N` and the upper end of `ρ`'s domain.
    RhoN { rho: Box<UnitAutomorphism>, neg: Box<UnitNegation> },
}

/// A validated automorphism expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AutoNode", into = "AutoNode")]
pub struct UnitAutomorphism {
    node: AutoNode,
}

impl TryFrom<AutoNode> for UnitAutomorphism {
    type Error = Error;

    fn try_from(node: AutoNode) -> Result<Self> {
        Self::new(node)
    }
}

impl From<UnitAutomorphism> for AutoNode {
    fn from(a: UnitAutomorphism) -> Self {
        a.node
    }
}

impl UnitAutomorphism {
    pub fn new(node: AutoNode) -> Result<Self> {
        match &node {
            AutoNode::Identity | AutoNode::Inverse { .. } => {}
            AutoNode::Power { p } => {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(Error::Argument(format!("power exponent must be positive, got {p}")));
                }
            }
            AutoNode::PwlInc { points } => validate_pwl_increasing(points)?,
            AutoNode::Compose { outer, inner } => {
                if outer.domain_hi() != inner.domain_hi() {
                    return Err(Error::Argument(format!(
                        "cannot compose automorphisms of [0,{}] and [0,{}]",
                        outer.domain_hi(),
                        inner.domain_hi()
                    )));
                }
            }
            AutoNode::Rescaled { inner, e } => {
                if !(*e > 0.0 && *e <= 1.0) {
                    return Err(Error::Argument(format!("rescaling bound must lie in (0,1], got {e}")));
                }
                if inner.domain_hi() != 1.0 {
                    return Err(Error::Argument("only automorphisms of [0,1] can be rescaled".into()));
                }
            }
            AutoNode::RhoN { rho, neg } => validate_rho_n(rho, neg)?,
        }
        Ok(Self { node })
    }

    pub fn identity() -> Self {
        Self { node: AutoNode::Identity }
    }

    pub fn power(p: f64) -> Result<Self> {
        Self::new(AutoNode::Power { p })
    }

    pub fn pwl(points: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(AutoNode::PwlInc { points })
    }

    pub fn compose(outer: UnitAutomorphism, inner: UnitAutomorphism) -> Result<Self> {
        Self::new(AutoNode::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        })
    }

    pub fn rescaled(inner: UnitAutomorphism, e: f64) -> Result<Self> {
        Self::new(AutoNode::Rescaled {
            inner: Box::new(inner),
            e,
        })
    }

    pub fn node(&self) -> &AutoNode {
        &self.node
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("expressions serialize")
    }

    /// Upper end `hi` of the domain `[0, hi]`.
    pub fn domain_hi(&self) -> f64 {
        match &self.node {
            AutoNode::Compose { inner, .. } | AutoNode::Inverse { inner } => inner.domain_hi(),
            AutoNode::Rescaled { e, .. } => *e,
            _ => 1.0,
        }
    }

    /// Checked evaluation: `x` must lie in the domain.
    pub fn eval<T: Scalar>(&self, x: T) -> Result<T> {
        self.check_domain(x)?;
        Ok(self.apply(x))
    }

    /// Checked inverse evaluation.
    pub fn eval_inverse<T: Scalar>(&self, y: T) -> Result<T> {
        self.check_domain(y)?;
        Ok(self.apply_inverse(y))
    }

    /// Evaluation with the input clamped into the domain.
    pub fn apply<T: Scalar>(&self, x: T) -> T {
        let hi = T::lit(self.domain_hi());
        let x = clamp_unit(x, T::zero(), hi);
        let v = match &self.node {
            AutoNode::Identity => x,
            AutoNode::Power { p } => x.powf(T::lit(*p)),
            AutoNode::PwlInc { points } => interpolate(points, x),
            AutoNode::Compose { outer, inner } => outer.apply(inner.apply(x)),
            AutoNode::Inverse { inner } => inner.apply_inverse(x),
            AutoNode::Rescaled { inner, e } => {
                let e = T::lit(*e);
                e * inner.apply(x / e)
            }
            AutoNode::RhoN { rho, neg } => {
                let e = T::lit(rho.domain_hi());
                if x <= e {
                    rho.apply(x)
                } else {
                    neg.eval(rho.apply(neg.eval(x)))
                }
            }
        };
        clamp_unit(v, T::zero(), hi)
    }

    /// Inverse evaluation with the input clamped into the domain.
    pub fn apply_inverse<T: Scalar>(&self, y: T) -> T {
        let hi = T::lit(self.domain_hi());
        let y = clamp_unit(y, T::zero(), hi);
        let v = match &self.node {
            AutoNode::Identity => y,
            AutoNode::Power { p } => y.powf(T::one() / T::lit(*p)),
            AutoNode::PwlInc { points } => {
                let swapped: Vec<(f64, f64)> = points.iter().map(|&(a, b)| (b, a)).collect();
                interpolate(&swapped, y)
            }
            AutoNode::Compose { outer, inner } => inner.apply_inverse(outer.apply_inverse(y)),
            AutoNode::Inverse { inner } => inner.apply(y),
            AutoNode::Rescaled { inner, e } => {
                let e = T::lit(*e);
                e * inner.apply_inverse(y / e)
            }
            AutoNode::RhoN { .. } => self.invert_numerically(y),
        };
        clamp_unit(v, T::zero(), hi)
    }

    /// Inverse by monotone bisection on the domain, ignoring closed forms.
    pub fn invert_numerically<T: Scalar>(&self, y: T) -> T {
        let hi = T::lit(self.domain_hi());
        let tol = T::lit(DEFAULT_TOL).max(T::epsilon());
        invert_increasing(|t| self.apply(t), y, T::zero(), hi, tol, DEFAULT_MAX_ITER)
    }

    fn check_domain<T: Scalar>(&self, x: T) -> Result<()> {
        let hi = T::lit(self.domain_hi());
        if x.is_nan() || x < -T::slack() || x > hi + T::slack() {
            return Err(Error::Domain(format!(
                "{x} outside automorphism domain [0,{}]",
                self.domain_hi()
            )));
        }
        Ok(())
    }

    /// Boundary conditions (exact) and strict increase between adjacent grid points.
    pub fn check_automorphism(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let hi = self.domain_hi();
        let xs: Vec<f64> = unit_grid::<f64>(m.max(2)).into_iter().map(|t| t * hi).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| self.apply(x)).collect();
        let report = PropertyReport::new("unit.automorphism", 1, m, 0.0);
        if ys[0] != 0.0 || ys[ys.len() - 1] != hi {
            return report
                .fail(json!({"at_lo": ys[0], "at_hi": ys[ys.len() - 1], "hi": hi}))
                .timed(start);
        }
        let s = scan::points(xs.len() - 1, |i| {
            if ys[i + 1] > ys[i] {
                Check::Ok(0.0)
            } else {
                Check::Fail(ys[i] - ys[i + 1])
            }
        });
        report
            .absorb(&s, |i, _| json!({"x": xs[i], "y": xs[i + 1], "a_x": ys[i], "a_y": ys[i + 1]}))
            .timed(start)
    }
}

/// `ρ⁻¹`. Inverting an inverse returns the original expression.
pub fn invert(a: &UnitAutomorphism) -> UnitAutomorphism {
    match &a.node {
        AutoNode::Inverse { inner } => (**inner).clone(),
        _ => UnitAutomorphism {
            node: AutoNode::Inverse {
                inner: Box::new(a.clone()),
            },
        },
    }
}

/// The `ρ`-conjugate `ρ⁻¹ ∘ f ∘ ρ` of a unary negation.
pub fn conjugate_unary(f: &UnitNegation, rho: &UnitAutomorphism) -> Result<UnitNegation> {
    UnitNegation::conjugate(f.clone(), rho.clone())
}

/// Checks `ρ(N(x)) = N(ρ(x))` within ε on the `m`-point grid.
pub fn is_n_preserving(rho: &UnitAutomorphism, neg: &UnitNegation, m: usize) -> PropertyReport {
    let start = Instant::now();
    let xs = unit_grid::<f64>(m.max(2));
    let report = PropertyReport::new("unit.n_preserving", 1, m, EPS);
    if rho.domain_hi() != 1.0 {
        return report
            .fail(json!({"reason": "automorphism does not act on [0,1]", "hi": rho.domain_hi()}))
            .timed(start);
    }
    let gap = |x: f64| (rho.apply(neg.eval(x)) - neg.eval(rho.apply(x))).abs();
    let s = scan::points(xs.len(), |i| {
        let err = gap(xs[i]);
        if err <= EPS {
            Check::Ok(err)
        } else {
            Check::Fail(err)
        }
    });
    report
        .absorb(&s, |i, _| {
            let x = xs[i];
            json!({"x": x, "rho_n": rho.apply(neg.eval(x)), "n_rho": neg.eval(rho.apply(x))})
        })
        .timed(start)
}

/// Builds `ρ^N` from an automorphism `ρ` of `[0,e]` and a strong negation `N`
/// with equilibrium `e`.
pub fn rho_n(rho: &UnitAutomorphism, neg: &UnitNegation) -> Result<UnitAutomorphism> {
    UnitAutomorphism::new(AutoNode::RhoN {
        rho: Box::new(rho.clone()),
        neg: Box::new(neg.clone()),
    })
}

fn validate_rho_n(rho: &UnitAutomorphism, neg: &UnitNegation) -> Result<()> {
    let strong = neg.is_strong(M_POINT);
    if !strong.passed() {
        return Err(Error::Precondition(format!(
            "negation is not strong at resolution {M_POINT}: {}",
            strong.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let eq = neg.equilibrium(DEFAULT_TOL);
    let e = match eq.kind {
        EquilibriumKind::Point(e) => e,
        _ => {
            return Err(Error::Precondition(format!(
                "negation has no equilibrium point: {}",
                eq.diagnostic.unwrap_or_default()
            )))
        }
    };
    if (rho.domain_hi() - e).abs() > EPS {
        return Err(Error::Precondition(format!(
            "automorphism acts on [0,{}] but the equilibrium is {e}",
            rho.domain_hi()
        )));
    }
    Ok(())
}

fn validate_pwl_increasing(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::Argument("piecewise-linear automorphism needs at least two points".into()));
    }
    let (first, last) = (points[0], points[points.len() - 1]);
    if first != (0.0, 0.0) || last != (1.0, 1.0) {
        return Err(Error::Argument(format!(
            "piecewise-linear automorphism must run from (0,0) to (1,1), got {first:?} .. {last:?}"
        )));
    }
    for (i, w) in points.windows(2).enumerate() {
        if !(w[0].0 < w[1].0 && w[0].1 < w[1].1) {
            return Err(Error::Argument(format!("control points not strictly increasing at point {}", i + 1)));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::Verdict;

    fn two_x_squared() -> UnitAutomorphism {
        // 0.5·(x/0.5)² = 2x² on [0, 0.5]
        UnitAutomorphism::rescaled(UnitAutomorphism::power(2.0).unwrap(), 0.5).unwrap()
    }

    #[test]
    fn evaluation() {
        let sq = UnitAutomorphism::power(2.0).unwrap();
        assert!((sq.eval(0.6f64).unwrap() - 0.36).abs() < 1e-15);
        assert!((invert(&sq).eval(0.36f64).unwrap() - 0.6).abs() < 1e-12);
        assert!((invert(&UnitAutomorphism::power(3.0).unwrap()).eval(0.125f64).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(invert(&UnitAutomorphism::identity()).eval(0.3).unwrap(), 0.3);
        assert!(sq.eval(1.5).is_err());
        assert!(two_x_squared().eval(0.75).is_err());
        assert!((two_x_squared().eval(0.25f64).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn double_inverse_simplifies() {
        let sq = UnitAutomorphism::power(2.0).unwrap();
        assert_eq!(invert(&invert(&sq)), sq);
    }

    #[test]
    fn closed_form_inverse_matches_bisection() {
        let a = UnitAutomorphism::compose(
            UnitAutomorphism::pwl(vec![(0.0, 0.0), (0.3, 0.6), (1.0, 1.0)]).unwrap(),
            UnitAutomorphism::power(3.0).unwrap(),
        )
        .unwrap();
        for k in 0..=100 {
            let y = k as f64 / 100.0;
            assert!((a.apply_inverse(y) - a.invert_numerically(y)).abs() < 1e-11);
        }
    }

    #[test]
    fn rho_n_branches() {
        let r = rho_n(&two_x_squared(), &UnitNegation::standard()).unwrap();
        assert!((r.eval(0.25f64).unwrap() - 0.125).abs() < 1e-15);
        assert!((r.eval(0.75f64).unwrap() - 0.875).abs() < 1e-15);
        assert_eq!(r.eval(0.5).unwrap(), 0.5);
        assert!(r.check_automorphism(101).passed());
        // inverse through bisection
        assert!((r.eval_inverse(0.875f64).unwrap() - 0.75).abs() < 1e-11);
    }

    #[test]
    fn rho_n_preconditions() {
        let not_strong = UnitNegation::cupk(2).unwrap();
        let err = rho_n(&two_x_squared(), &not_strong).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let wrong_domain = UnitAutomorphism::rescaled(UnitAutomorphism::identity(), 0.4).unwrap();
        assert!(matches!(
            rho_n(&wrong_domain, &UnitNegation::standard()).unwrap_err(),
            Error::Precondition(_)
        ));
    }

    #[test]
    fn conjugation() {
        let sq = UnitAutomorphism::power(2.0).unwrap();
        let c = conjugate_unary(&UnitNegation::standard(), &sq).unwrap();
        assert!((c.eval(0.6f64) - 0.8).abs() < 1e-12);
        let id = conjugate_unary(&UnitNegation::cupk(2).unwrap(), &UnitAutomorphism::identity()).unwrap();
        assert_eq!(id.eval(0.5), 0.75);
        let back = conjugate_unary(&c, &invert(&sq)).unwrap();
        for k in 0..=40 {
            let x = k as f64 / 40.0;
            assert!((back.eval(x) - (1.0 - x)).abs() < 1e-7);
        }
    }

    #[test]
    fn n_preservation() {
        let std = UnitNegation::standard();
        assert!(is_n_preserving(&UnitAutomorphism::identity(), &std, 41).passed());
        let r = is_n_preserving(&UnitAutomorphism::power(2.0).unwrap(), &std, 41);
        assert_eq!(r.verdict, Verdict::Fail);
        let rn = rho_n(&two_x_squared(), &std).unwrap();
        assert!(is_n_preserving(&rn, &std, 41).passed());
        assert!(is_n_preserving(&invert(&rn), &std, 41).passed());
    }

    #[test]
    fn validation() {
        assert!(UnitAutomorphism::power(0.0).is_err());
        assert!(UnitAutomorphism::pwl(vec![(0.0, 0.0), (0.5, 0.5), (0.6, 0.5), (1.0, 1.0)]).is_err());
        assert!(UnitAutomorphism::rescaled(UnitAutomorphism::identity(), 0.0).is_err());
        assert!(UnitAutomorphism::compose(two_x_squared(), UnitAutomorphism::identity()).is_err());
        assert!(UnitAutomorphism::rescaled(two_x_squared(), 0.5).is_err());
    }

    #[test]
    fn json_grammar() {
        let a = UnitAutomorphism::from_json(
            r#"{"kind":"rho_n","rho":{"kind":"rescaled","inner":{"kind":"power","p":2.0},"e":0.5},"neg":{"kind":"standard"}}"#,
        )
        .unwrap();
        assert!((a.eval(0.75f64).unwrap() - 0.875).abs() < 1e-15);
        assert_eq!(UnitAutomorphism::from_json(&a.to_json()).unwrap(), a);
        assert!(UnitAutomorphism::from_json(r#"{"kind":"power","p":-1}"#).is_err());
    }
}
