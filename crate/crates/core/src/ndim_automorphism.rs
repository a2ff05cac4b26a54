//! Automorphisms of `L_n([0,1])` and of `L_n([0,e])`.
//!
//! Every automorphism of the simplex is the componentwise lift `ψ̃` of a unary
//! automorphism, so `FromUnit` is the only generator. `PhiN` is the
//! `𝒩`-preserving map `φ^𝒩` assembled from an automorphism of `[0,e]`, where
//! `/e/` is the equilibrium of a strong `𝒩`.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ndim_negation::{continuity_base, NDimNegation};
use crate::scalar::{clamp_unit, Scalar};
use crate::simplex::{leq_tol, sup_dist, unit_grid, NDInterval, SimplexGrid};
use crate::solve::{invert_increasing, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::unit_automorphism::{is_n_preserving, UnitAutomorphism};
use crate::unit_negation::{EquilibriumKind, UnitNegation};
use crate::verify::continuity;
use crate::verify::scan::{self, Check};
use crate::verify::{PropertyReport, EPS, M_PAIR, RECON_TOL};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NdAutoNode {
    /// `ψ̃(x) = (ψ(π₁(x)), …, ψ(πₙ(x)))`.
    FromUnit { psi: UnitAutomorphism, n: usize },
    InverseN { inner: Box<NDimAutomorphism> },
    /// `φ^𝒩` with `φ = ψ̃_e` acting on `L_n([0,e])`.
    PhiN {
        psi_e: UnitAutomorphism,
        e: f64,
        neg: Box<NDimNegation>,
    },
}

/// A validated n-dimensional automorphism expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NdAutoNode", into = "NdAutoNode")]
pub struct NDimAutomorphism {
    node: NdAutoNode,
}

impl TryFrom<NdAutoNode> for NDimAutomorphism {
    type Error = Error;

    fn try_from(node: NdAutoNode) -> Result<Self> {
        Self::new(node)
    }
}

impl From<NDimAutomorphism> for NdAutoNode {
    fn from(a: NDimAutomorphism) -> Self {
        a.node
    }
}

/// Which case of the `φ^𝒩` definition produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `x ≤ /e/`: `φ(x)`.
    Lower,
    /// `x ≥ /e/`: `𝒩(φ(𝒩(x)))`.
    Upper,
    /// `π_i(x) ≤ e < π_{i+1}(x)`: first `i` components from `φ(x)`, the rest
    /// from `𝒩(φ(𝒩(x)))`.
    Mixed(usize),
}

impl NDimAutomorphism {
    pub fn new(node: NdAutoNode) -> Result<Self> {
        match &node {
            NdAutoNode::FromUnit { n, .. } => {
                if *n == 0 {
                    return Err(Error::Argument("dimension must be at least 1".into()));
                }
            }
            NdAutoNode::InverseN { .. } => {}
            NdAutoNode::PhiN { psi_e, e, neg } => validate_phi_n(psi_e, *e, neg)?,
        }
        Ok(Self { node })
    }

    pub fn from_unit(psi: UnitAutomorphism, n: usize) -> Result<Self> {
        Self::new(NdAutoNode::FromUnit { psi, n })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_unit(UnitAutomorphism::identity(), n)
    }

    /// `φ⁻¹`; inverting an inverse returns the original expression.
    pub fn inverse(&self) -> Self {
        match &self.node {
            NdAutoNode::InverseN { inner } => (**inner).clone(),
            _ => Self {
                node: NdAutoNode::InverseN {
                    inner: Box::new(self.clone()),
                },
            },
        }
    }

    pub fn node(&self) -> &NdAutoNode {
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
            NdAutoNode::FromUnit { n, .. } => *n,
            NdAutoNode::InverseN { inner } => inner.dim(),
            NdAutoNode::PhiN { neg, .. } => neg.dim(),
        }
    }

    /// Upper end `hi` of the domain `L_n([0,hi])`.
    pub fn domain_hi(&self) -> f64 {
        match &self.node {
            NdAutoNode::FromUnit { psi, .. } => psi.domain_hi(),
            NdAutoNode::InverseN { inner } => inner.domain_hi(),
            NdAutoNode::PhiN { .. } => 1.0,
        }
    }

    pub fn eval<T: Scalar>(&self, x: &NDInterval<T>) -> Result<NDInterval<T>> {
        self.check_input(x)?;
        NDInterval::from_computed(self.apply(x.values()))
    }

    pub fn eval_inverse<T: Scalar>(&self, y: &NDInterval<T>) -> Result<NDInterval<T>> {
        self.check_input(y)?;
        NDInterval::from_computed(self.apply_inverse(y.values()))
    }

    /// Raw evaluation on a tuple assumed to lie in the domain.
    pub fn apply<T: Scalar>(&self, x: &[T]) -> Vec<T> {
        match &self.node {
            NdAutoNode::FromUnit { psi, .. } => x.iter().map(|&v| psi.apply(v)).collect(),
            NdAutoNode::InverseN { inner } => inner.apply_inverse(x),
            NdAutoNode::PhiN { psi_e, e, neg } => phi_n_eval(x, T::lit(*e), &|t| psi_e.apply(t), neg, None),
        }
    }

    /// Raw inverse evaluation. `(φ^𝒩)⁻¹` is `φ^𝒩` built from `ψ''⁻¹`.
    pub fn apply_inverse<T: Scalar>(&self, y: &[T]) -> Vec<T> {
        match &self.node {
            NdAutoNode::FromUnit { psi, .. } => y.iter().map(|&v| psi.apply_inverse(v)).collect(),
            NdAutoNode::InverseN { inner } => inner.apply(y),
            NdAutoNode::PhiN { psi_e, e, neg } => {
                phi_n_eval(y, T::lit(*e), &|t| psi_e.apply_inverse(t), neg, None)
            }
        }
    }

    fn check_input<T: Scalar>(&self, x: &NDInterval<T>) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Argument(format!(
                "dimension mismatch: automorphism on L_{}, point in L_{}",
                self.dim(),
                x.dim()
            )));
        }
        let hi = self.domain_hi();
        if x.values()[x.dim() - 1] > T::lit(hi) + T::slack() {
            return Err(Error::Domain(format!("{x} outside L_{}([0,{hi}])", self.dim())));
        }
        Ok(())
    }

    fn grid(&self, m: usize) -> Vec<Vec<f64>> {
        let hi = self.domain_hi();
        SimplexGrid::<f64>::new(self.dim(), m.max(2))
            .expect("dimension is positive")
            .points()
            .iter()
            .map(|p| p.values().iter().map(|&v| v * hi).collect())
            .collect()
    }

    /// `φ(/0/) = /0/` and `φ(/hi/) = /hi/`, exactly.
    pub fn check_boundary(&self) -> PropertyReport {
        let start = Instant::now();
        let n = self.dim();
        let hi = self.domain_hi();
        let lo_img = self.apply(&vec![0.0f64; n]);
        let hi_img = self.apply(&vec![hi; n]);
        let report = PropertyReport::new("auto.boundary", n, 2, 0.0);
        if lo_img.iter().all(|&v| v == 0.0) && hi_img.iter().all(|&v| v == hi) {
            report.timed(start)
        } else {
            report.fail(json!({"image_of_0": lo_img, "image_of_hi": hi_img})).timed(start)
        }
    }

    /// `x ≤ y` iff `φ(x) ≤ φ(y)` on every grid pair.
    pub fn check_order_isomorphism(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let pts = self.grid(m);
        let outs: Vec<Vec<f64>> = pts.iter().map(|p| self.apply(p)).collect();
        let s = scan::pairs(pts.len(), 0, |a, b| {
            let before = leq_tol(&pts[a], &pts[b], 0.0);
            let after = leq_tol(&outs[a], &outs[b], EPS);
            if before == after {
                Check::Ok(0.0)
            } else {
                Check::Fail(1.0)
            }
        });
        PropertyReport::new("auto.order_isomorphism", self.dim(), m, EPS)
            .absorb(&s, |a, b| {
                json!({"x": pts[a], "y": pts[b], "phi_x": outs[a], "phi_y": outs[b]})
            })
            .timed(start)
    }

    /// `φ⁻¹(φ(x)) = x` and `φ(φ⁻¹(x)) = x` within ε on the grid.
    pub fn check_inverse_roundtrip(&self, m: usize) -> PropertyReport {
        let start = Instant::now();
        let pts = self.grid(m);
        let err = |x: &[f64]| {
            sup_dist(&self.apply_inverse(&self.apply(x)), x).max(sup_dist(&self.apply(&self.apply_inverse(x)), x))
        };
        let s = scan::points(pts.len(), |k| {
            let e = err(&pts[k]);
            if e <= EPS {
                Check::Ok(e)
            } else {
                Check::Fail(e)
            }
        });
        PropertyReport::new("auto.inverse_roundtrip", self.dim(), m, EPS)
            .absorb(&s, |k, _| json!({"x": pts[k], "error": err(&pts[k])}))
            .timed(start)
    }

    /// Refinement scan for jumps of `φ ∘ sort_to_simplex` on `L_n([0,1])`.
    pub fn discontinuity(&self, m: usize, levels: usize) -> PropertyReport {
        let hi = self.domain_hi();
        continuity::discontinuity_scan(self.dim(), continuity_base(self.dim(), m), levels, |t| {
            let scaled: Vec<f64> = t.iter().map(|&v| v * hi).collect();
            Some(self.apply(&scaled))
        })
    }
}

/// Evaluates the `φ^𝒩` definition with `φ = g̃` on `L_n([0,e])`.
///
/// `branch = None` selects the case by precedence: lower, then upper, then
/// mixed. Components fed to `g` are capped at `e`; in every case the capped
/// components are the ones the definition discards.
pub fn phi_n_eval<T: Scalar>(
    x: &[T],
    e: T,
    g: &impl Fn(T) -> T,
    neg: &NDimNegation,
    branch: Option<Branch>,
) -> Vec<T> {
    let n = x.len();
    let phi = |y: &[T]| -> Vec<T> { y.iter().map(|&v| g(clamp_unit(v, T::zero(), e))).collect() };
    let branch = branch.unwrap_or_else(|| {
        if x[n - 1] <= e {
            Branch::Lower
        } else if x[0] >= e {
            Branch::Upper
        } else {
            Branch::Mixed(x.iter().filter(|&&v| v <= e).count())
        }
    });
    match branch {
        Branch::Lower => phi(x),
        Branch::Upper => neg.apply(&phi(&neg.apply(x))),
        Branch::Mixed(i) => {
            let mut out = phi(&x[..i]);
            out.extend_from_slice(&neg.apply(&phi(&neg.apply(x)))[i..]);
            out
        }
    }
}

/// `𝒩^φ = φ⁻¹ ∘ 𝒩 ∘ φ`.
pub fn conjugate_ndneg(neg: &NDimNegation, phi: &NDimAutomorphism) -> Result<NDimNegation> {
    NDimNegation::conjugate(neg.clone(), phi.clone())
}

/// `𝒩_S^φ`.
pub fn strong_from_automorphism(phi: &NDimAutomorphism) -> Result<NDimNegation> {
    NDimNegation::strong_from_auto(phi.clone())
}

/// Compares `(Ñ₁…Ñₙ)^ψ̃` with `(N₁^ψ … Nₙ^ψ)~` pointwise on the grid.
pub fn representable_conjugation_identity(
    negs: &[UnitNegation],
    psi: &UnitAutomorphism,
    m: usize,
) -> Result<PropertyReport> {
    let start = Instant::now();
    let n = negs.len();
    let lhs = NDimNegation::conjugate(
        NDimNegation::representable(negs.to_vec())?,
        NDimAutomorphism::from_unit(psi.clone(), n)?,
    )?;
    let rhs = NDimNegation::representable(
        negs.iter()
            .map(|neg| UnitNegation::conjugate(neg.clone(), psi.clone()))
            .collect::<Result<Vec<_>>>()?,
    )?;
    Ok(compare_negations(&lhs, &rhs, m, EPS, "auto.conjugation_identity").timed(start))
}

/// `((𝒩^φ)^{φ⁻¹}) = 𝒩` within [`RECON_TOL`].
pub fn double_conjugation_roundtrip(neg: &NDimNegation, phi: &NDimAutomorphism, m: usize) -> Result<PropertyReport> {
    let start = Instant::now();
    let back = conjugate_ndneg(&conjugate_ndneg(neg, phi)?, &phi.inverse())?;
    Ok(compare_negations(neg, &back, m, RECON_TOL, "auto.double_conjugation").timed(start))
}

/// `𝒩` is strong iff `𝒩^φ` is strong, on the grid.
pub fn conjugation_preserves_strongness(neg: &NDimNegation, phi: &NDimAutomorphism, m: usize) -> Result<PropertyReport> {
    let start = Instant::now();
    let conj = conjugate_ndneg(neg, phi)?;
    let (a, b) = (neg.is_strong_nd(m).passed(), conj.is_strong_nd(m).passed());
    let report = PropertyReport::new("auto.conjugate_strongness", neg.dim(), m, EPS);
    Ok(if a == b {
        report.with_note(if a { "both strong" } else { "neither strong" })
    } else {
        report.fail(json!({"original_strong": a, "conjugate_strong": b}))
    }
    .timed(start))
}

/// Recovers `ψ` from a strong `𝒩` through `ψ(t) = (1 + t − N(t))/2`, where
/// `N = N₁` is the first induced negation, and checks `𝒩 = 𝒩_S^{ψ̃}` on the grid.
pub fn trillas_roundtrip(neg: &NDimNegation, m: usize) -> Result<PropertyReport> {
    let strong = neg.is_strong_nd(m);
    if !strong.passed() {
        return Err(Error::Precondition(format!(
            "negation is not strong at resolution {m}: {}",
            strong.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let start = Instant::now();
    let n = neg.dim();
    let psi = |t: f64| (1.0 + t - neg.induced_at(1, t)) / 2.0;
    let psi_inv = |y: f64| invert_increasing(psi, y, 0.0, 1.0, DEFAULT_TOL, DEFAULT_MAX_ITER);
    let rebuilt = |x: &[f64]| -> Vec<f64> {
        let y: Vec<f64> = x.iter().map(|&v| psi(v)).collect();
        y.iter().rev().map(|&v| psi_inv(1.0 - v)).collect()
    };
    let pts = SimplexGrid::<f64>::new(n, m.max(2)).expect("dimension is positive");
    let pts = pts.points();
    let s = scan::points(pts.len(), |k| {
        let x = pts[k].values();
        let err = sup_dist(&neg.apply(x), &rebuilt(x));
        if err <= RECON_TOL {
            Check::Ok(err)
        } else {
            Check::Fail(err)
        }
    });
    Ok(PropertyReport::new("auto.trillas_roundtrip", n, m, RECON_TOL)
        .absorb(&s, |k, _| {
            let x = pts[k].values();
            json!({"x": pts[k], "n_x": neg.apply(x), "rebuilt": rebuilt(x)})
        })
        .merge([neg.check_induced_equal(m)])
        .timed(start))
}

/// With `φ(x) = x²` componentwise: `𝒩(x) < 𝒩^φ(x)` and `𝒩^{φ⁻¹}(x) < 𝒩(x)`
/// componentwise by more than ε at every grid point with all coordinates in
/// `(0,1)`; at the other points except `/0/` and `/1/` the non-strict
/// inequalities are checked.
pub fn strict_conjugation_gap(neg: &NDimNegation, m: usize) -> Result<PropertyReport> {
    if !neg.is_strong_nd(m).passed() && !neg.is_strict_nd(m).passed() {
        return Err(Error::Precondition(format!(
            "negation is neither strong nor strict at resolution {m}"
        )));
    }
    let start = Instant::now();
    let n = neg.dim();
    let square = NDimAutomorphism::from_unit(UnitAutomorphism::power(2.0)?, n)?;
    let up = conjugate_ndneg(neg, &square)?;
    let down = conjugate_ndneg(neg, &square.inverse())?;
    let grid = SimplexGrid::<f64>::new(n, m.max(2)).expect("dimension is positive");
    let pts = grid.points();
    let gap = |x: &[f64]| -> f64 {
        let base = neg.apply(x);
        let above = up.apply(x);
        let below = down.apply(x);
        base.iter()
            .zip(&above)
            .zip(&below)
            .map(|((b, a), d)| (a - b).min(b - d))
            .fold(f64::INFINITY, f64::min)
    };
    let s = scan::points(pts.len(), |k| {
        let x = pts[k].values();
        if x.iter().all(|&v| v == 0.0) || x.iter().all(|&v| v == 1.0) {
            return Check::Skip;
        }
        let interior = x.iter().all(|&v| v > 0.0 && v < 1.0);
        let g = gap(x);
        let ok = if interior { g > EPS } else { g >= -EPS };
        if ok {
            Check::Ok(0.0)
        } else {
            Check::Fail(-g)
        }
    });
    Ok(PropertyReport::new("auto.strict_gap", n, m, EPS)
        .absorb(&s, |k, _| {
            let x = pts[k].values();
            json!({
                "x": pts[k],
                "n_x": neg.apply(x),
                "conjugate_by_square": up.apply(x),
                "conjugate_by_root": down.apply(x),
                "margin": gap(x),
            })
        })
        .timed(start))
}

/// Builds `φ^𝒩` from `φ = FromUnit(ψ'')` on `L_n([0,e])` and a strong `𝒩`
/// whose equilibrium is `/e/`.
pub fn phi_n(phi: &NDimAutomorphism, neg: &NDimNegation) -> Result<NDimAutomorphism> {
    let NdAutoNode::FromUnit { psi, n } = phi.node() else {
        return Err(Error::Argument("φ^𝒩 needs a componentwise automorphism of L_n([0,e])".into()));
    };
    if *n != neg.dim() {
        return Err(Error::Argument(format!(
            "dimension mismatch: automorphism on L_{n}, negation on L_{}",
            neg.dim()
        )));
    }
    NDimAutomorphism::new(NdAutoNode::PhiN {
        psi_e: psi.clone(),
        e: psi.domain_hi(),
        neg: Box::new(neg.clone()),
    })
}

fn validate_phi_n(psi_e: &UnitAutomorphism, e: f64, neg: &NDimNegation) -> Result<()> {
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::Argument(format!("equilibrium bound must lie in (0,1), got {e}")));
    }
    if (psi_e.domain_hi() - e).abs() > EPS {
        return Err(Error::Precondition(format!(
            "automorphism acts on [0,{}] but e = {e}",
            psi_e.domain_hi()
        )));
    }
    let strong = neg.is_strong_nd(M_PAIR);
    if !strong.passed() {
        return Err(Error::Precondition(format!(
            "negation is not strong at resolution {M_PAIR}: {}",
            strong.witness.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let eq = neg.nd_equilibrium(DEFAULT_TOL);
    match &eq.kind {
        EquilibriumKind::Point(p) if p.is_degenerate() && (p.values()[0] - e).abs() <= EPS => Ok(()),
        EquilibriumKind::Point(p) => Err(Error::Precondition(format!(
            "negation has equilibrium {p}, not /{e}/"
        ))),
        _ => Err(Error::Precondition(format!(
            "negation has no degenerate equilibrium: {}",
            eq.diagnostic.unwrap_or_default()
        ))),
    }
}

/// `φ(𝒩(x)) = 𝒩(φ(x))` within ε on the grid.
pub fn is_nd_preserving(phi: &NDimAutomorphism, neg: &NDimNegation, m: usize) -> Result<PropertyReport> {
    if phi.dim() != neg.dim() {
        return Err(Error::Argument(format!(
            "dimension mismatch: automorphism on L_{}, negation on L_{}",
            phi.dim(),
            neg.dim()
        )));
    }
    if phi.domain_hi() != 1.0 {
        return Err(Error::Argument("automorphism must act on L_n([0,1])".into()));
    }
    let start = Instant::now();
    let grid = SimplexGrid::<f64>::new(neg.dim(), m.max(2)).expect("dimension is positive");
    let pts = grid.points();
    let gap = |x: &[f64]| sup_dist(&phi.apply(&neg.apply(x)), &neg.apply(&phi.apply(x)));
    let s = scan::points(pts.len(), |k| {
        let e = gap(pts[k].values());
        if e <= EPS {
            Check::Ok(e)
        } else {
            Check::Fail(e)
        }
    });
    Ok(PropertyReport::new("auto.nd_preserving", neg.dim(), m, EPS)
        .absorb(&s, |k, _| {
            let x = pts[k].values();
            json!({"x": pts[k], "phi_n": phi.apply(&neg.apply(x)), "n_phi": neg.apply(&phi.apply(x))})
        })
        .timed(start))
}

/// Unit-level and n-level preservation verdicts for `ψ̃` and `Ñ₁…Ñₙ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservingEquivalence {
    /// `ψ` is `N_i`-preserving for every `i`.
    pub unit_level: bool,
    /// `ψ̃` is `Ñ₁…Ñₙ`-preserving.
    pub n_level: bool,
    /// Passes iff the two verdicts agree.
    pub report: PropertyReport,
}

pub fn preserving_equivalence(
    psi: &UnitAutomorphism,
    negs: &[UnitNegation],
    m: usize,
) -> Result<PreservingEquivalence> {
    let start = Instant::now();
    let n = negs.len();
    let neg = NDimNegation::representable(negs.to_vec())?;
    let phi = NDimAutomorphism::from_unit(psi.clone(), n)?;
    let nd = is_nd_preserving(&phi, &neg, m)?;
    let unit: Vec<PropertyReport> = negs.iter().map(|x| is_n_preserving(psi, x, m)).collect();
    let unit_level = unit.iter().all(PropertyReport::passed);
    let n_level = nd.passed();
    let mut report = PropertyReport::new("auto.preserving_equivalence", n, m, EPS);
    report.pairs_tested = nd.pairs_tested + unit.iter().map(|r| r.pairs_tested).sum::<u64>();
    report = if unit_level == n_level {
        report.with_note(if n_level { "preserving" } else { "not preserving" })
    } else {
        report.fail(json!({
            "unit_level": unit_level,
            "n_level": n_level,
            "n_level_witness": nd.witness,
        }))
    };
    Ok(PreservingEquivalence {
        unit_level,
        n_level,
        report: report.timed(start),
    })
}

/// At inputs with a coordinate equal to `e`, every applicable case of the
/// `φ^𝒩` definition gives the same value within ε.
pub fn branch_consistency(phi: &NDimAutomorphism, m: usize) -> Result<PropertyReport> {
    let NdAutoNode::PhiN { psi_e, e, neg } = phi.node() else {
        return Err(Error::Argument("branch consistency applies to φ^𝒩 expressions".into()));
    };
    let start = Instant::now();
    let n = neg.dim();
    let e = *e;
    let pts = points_touching(n, m, e);
    let spread = |x: &[f64]| -> f64 {
        let g = |t: f64| psi_e.apply(t);
        let mut branches = Vec::new();
        if x[n - 1] <= e {
            branches.push(Branch::Lower);
        }
        if x[0] >= e {
            branches.push(Branch::Upper);
        }
        for i in 1..n {
            if x[i - 1] <= e && e <= x[i] {
                branches.push(Branch::Mixed(i));
            }
        }
        let values: Vec<Vec<f64>> = branches
            .into_iter()
            .map(|b| phi_n_eval(x, e, &g, neg, Some(b)))
            .collect();
        values
            .iter()
            .flat_map(|a| values.iter().map(move |b| sup_dist(a, b)))
            .fold(0.0f64, f64::max)
    };
    let s = scan::points(pts.len(), |k| {
        let d = spread(&pts[k]);
        if d <= EPS {
            Check::Ok(d)
        } else {
            Check::Fail(d)
        }
    });
    Ok(PropertyReport::new("phin.branch_consistency", n, m, EPS)
        .absorb(&s, |k, _| json!({"x": pts[k], "spread": spread(&pts[k])}))
        .timed(start))
}

/// Extracts `ψ''(t) = π₁(φ(/t/))` on `[0,e]`, rebuilds `φ^𝒩` from it and
/// compares with `φ` on the grid within [`RECON_TOL`].
pub fn phi_n_reconstruction(phi: &NDimAutomorphism, neg: &NDimNegation, m: usize) -> Result<PropertyReport> {
    if phi.dim() != neg.dim() {
        return Err(Error::Argument("dimension mismatch".into()));
    }
    let eq = neg.nd_equilibrium(DEFAULT_TOL);
    let e = match eq.point() {
        Some(p) if p.is_degenerate() => p.values()[0],
        _ => {
            return Err(Error::Precondition(
                "negation has no degenerate equilibrium point".into(),
            ))
        }
    };
    let start = Instant::now();
    let n = neg.dim();
    let g = |t: f64| phi.apply(&vec![t; n])[0];
    let grid = SimplexGrid::<f64>::new(n, m.max(2)).expect("dimension is positive");
    let pts = grid.points();
    let s = scan::points(pts.len(), |k| {
        let x = pts[k].values();
        let err = sup_dist(&phi.apply(x), &phi_n_eval(x, e, &g, neg, None));
        if err <= RECON_TOL {
            Check::Ok(err)
        } else {
            Check::Fail(err)
        }
    });
    Ok(PropertyReport::new("phin.reconstruction", n, m, RECON_TOL)
        .absorb(&s, |k, _| {
            let x = pts[k].values();
            json!({"x": pts[k], "phi_x": phi.apply(x), "rebuilt": phi_n_eval(x, e, &g, neg, None)})
        })
        .timed(start))
}

fn compare_negations(a: &NDimNegation, b: &NDimNegation, m: usize, tol: f64, id: &str) -> PropertyReport {
    let grid = SimplexGrid::<f64>::new(a.dim(), m.max(2)).expect("dimension is positive");
    let pts = grid.points();
    let s = scan::points(pts.len(), |k| {
        let x = pts[k].values();
        let err = sup_dist(&a.apply(x), &b.apply(x));
        if err <= tol {
            Check::Ok(err)
        } else {
            Check::Fail(err)
        }
    });
    PropertyReport::new(id, a.dim(), m, tol).absorb(&s, |k, _| {
        let x = pts[k].values();
        json!({"x": pts[k], "lhs": a.apply(x), "rhs": b.apply(x)})
    })
}

/// Nondecreasing tuples over the `m`-point grid plus `e`, containing `e`.
fn points_touching(n: usize, m: usize, e: f64) -> Vec<Vec<f64>> {
    let mut coords = unit_grid::<f64>(m.max(2));
    coords.push(e);
    coords.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    coords.dedup();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    fn walk(coords: &[f64], start: usize, n: usize, e: f64, current: &mut Vec<f64>, out: &mut Vec<Vec<f64>>) {
        if current.len() == n {
            if current.contains(&e) {
                out.push(current.clone());
            }
            return;
        }
        for k in start..coords.len() {
            current.push(coords[k]);
            walk(coords, k, n, e, current, out);
            current.pop();
        }
    }
    walk(&coords, 0, n, e, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unit_automorphism::rho_n;
    use crate::verify::Verdict;

    fn iv(v: &[f64]) -> NDInterval<f64> {
        NDInterval::new(v.to_vec()).unwrap()
    }

    fn square(n: usize) -> NDimAutomorphism {
        NDimAutomorphism::from_unit(UnitAutomorphism::power(2.0).unwrap(), n).unwrap()
    }

    fn two_x_squared() -> UnitAutomorphism {
        UnitAutomorphism::rescaled(UnitAutomorphism::power(2.0).unwrap(), 0.5).unwrap()
    }

    fn hand_phi_n(n: usize) -> NDimAutomorphism {
        let phi = NDimAutomorphism::from_unit(two_x_squared(), n).unwrap();
        phi_n(&phi, &NDimNegation::standard(n).unwrap()).unwrap()
    }

    #[test]
    fn evaluation() {
        let out = square(2).eval(&iv(&[0.3, 0.6])).unwrap();
        assert!(sup_dist(out.values(), &[0.09, 0.36]) < 1e-15);
        for phi in [square(3), hand_phi_n(3), square(3).inverse()] {
            assert!(phi.check_boundary().passed());
            assert!(phi.check_inverse_roundtrip(11).passed());
            assert!(phi.check_order_isomorphism(7).passed());
        }
        let inv = square(2).inverse();
        let back = inv.eval(&square(2).eval(&iv(&[0.3, 0.6])).unwrap()).unwrap();
        assert!(sup_dist(back.values(), &[0.3, 0.6]) < 1e-12);
        assert_eq!(inv.inverse(), square(2));
        assert!(square(2).eval(&iv(&[0.3])).is_err());
        let half = NDimAutomorphism::from_unit(two_x_squared(), 2).unwrap();
        assert!(matches!(half.eval(&iv(&[0.3, 0.6])), Err(Error::Domain(_))));
    }

    #[test]
    fn conjugation() {
        let ns = NDimNegation::standard(2).unwrap();
        let same = conjugate_ndneg(&ns, &NDimAutomorphism::identity(2).unwrap()).unwrap();
        assert!(compare_negations(&ns, &same, 11, 0.0, "t").passed());
        let c = conjugate_ndneg(&ns, &square(2)).unwrap();
        let v = c.eval(&iv(&[0.6, 0.6])).unwrap();
        assert!(sup_dist(v.values(), &[0.8, 0.8]) < 1e-12);
        assert!(double_conjugation_roundtrip(&ns, &square(2), 11).unwrap().passed());
        assert!(conjugation_preserves_strongness(&ns, &square(2), 11).unwrap().passed());
        assert!(c.check_nd_axioms(7).passed());
        let s = strong_from_automorphism(&square(2)).unwrap();
        assert!(sup_dist(s.eval(&iv(&[0.6, 0.6])).unwrap().values(), &[0.8, 0.8]) < 1e-12);
    }

    #[test]
    fn conjugation_identity() {
        let ns = vec![UnitNegation::standard(); 3];
        assert!(representable_conjugation_identity(&ns, &UnitAutomorphism::power(2.0).unwrap(), 11)
            .unwrap()
            .passed());
        let cs: Vec<UnitNegation> = (1..=3).map(|k| UnitNegation::cupk(k).unwrap()).collect();
        let psi = UnitAutomorphism::pwl(vec![(0.0, 0.0), (0.2, 0.5), (0.7, 0.8), (1.0, 1.0)]).unwrap();
        let r = representable_conjugation_identity(&cs, &psi, 11).unwrap();
        assert!(r.passed());
        let id = representable_conjugation_identity(&cs, &UnitAutomorphism::identity(), 11).unwrap();
        assert_eq!(id.max_error, 0.0);
    }

    #[test]
    fn trillas() {
        let psi = UnitAutomorphism::pwl(vec![(0.0, 0.0), (0.4, 0.2), (0.9, 0.7), (1.0, 1.0)]).unwrap();
        let s = strong_from_automorphism(&NDimAutomorphism::from_unit(psi, 3).unwrap()).unwrap();
        assert!(trillas_roundtrip(&s, 11).unwrap().passed());
        assert!(trillas_roundtrip(&NDimNegation::bottom(2).unwrap(), 5).is_err());
    }

    #[test]
    fn strict_gap() {
        let ns = NDimNegation::standard(2).unwrap();
        let r = strict_conjugation_gap(&ns, 11).unwrap();
        assert!(r.passed(), "{r:?}");
        let up = conjugate_ndneg(&ns, &square(2)).unwrap();
        assert!(sup_dist(up.eval(&iv(&[0.6, 0.6])).unwrap().values(), &[0.8, 0.8]) < 1e-12);
        // at (0,1) the negation and its conjugates coincide
        assert_eq!(up.eval(&iv(&[0.0, 1.0])).unwrap(), iv(&[0.0, 1.0]));
        let strict = NDimNegation::tilde(UnitNegation::cupk(2).unwrap(), 2).unwrap();
        assert!(strict_conjugation_gap(&strict, 11).unwrap().passed());
        assert!(strict_conjugation_gap(&NDimNegation::bottom(2).unwrap(), 5).is_err());
    }

    #[test]
    fn phi_n_hand_values() {
        let phi = hand_phi_n(2);
        let v = phi.eval(&iv(&[0.25, 0.75])).unwrap();
        assert!(sup_dist(v.values(), &[0.125, 0.875]) < 1e-12);
        assert_eq!(phi.eval(&iv(&[0.5, 0.5])).unwrap(), iv(&[0.5, 0.5]));
        let low = phi.eval(&iv(&[0.1, 0.3])).unwrap();
        assert!(sup_dist(low.values(), &[0.02, 0.18]) < 1e-15);
        let inv = phi.eval_inverse(&iv(&[0.125, 0.875])).unwrap();
        assert!(sup_dist(inv.values(), &[0.25, 0.75]) < 1e-12);
    }

    #[test]
    fn phi_n_properties() {
        let ns = NDimNegation::standard(3).unwrap();
        let phi = hand_phi_n(3);
        assert!(is_nd_preserving(&phi, &ns, 11).unwrap().passed());
        assert!(is_nd_preserving(&phi.inverse(), &ns, 11).unwrap().passed());
        assert!(branch_consistency(&phi, 11).unwrap().passed());
        assert!(phi_n_reconstruction(&phi, &ns, 11).unwrap().passed());
        // φ^𝒩 coincides with the lift of ρ^N
        let lifted = NDimAutomorphism::from_unit(rho_n(&two_x_squared(), &UnitNegation::standard()).unwrap(), 3).unwrap();
        for p in SimplexGrid::<f64>::new(3, 11).unwrap().points() {
            assert!(sup_dist(&phi.apply(p.values()), &lifted.apply(p.values())) < 1e-12);
        }
    }

    #[test]
    fn phi_n_preconditions() {
        let half = NDimAutomorphism::from_unit(two_x_squared(), 2).unwrap();
        assert!(matches!(phi_n(&half, &NDimNegation::bottom(2).unwrap()), Err(Error::Precondition(_))));
        let chain = NDimNegation::tilde(UnitNegation::cupk(2).unwrap(), 2).unwrap();
        assert!(matches!(phi_n(&half, &chain), Err(Error::Precondition(_))));
        assert!(phi_n(&square(2), &NDimNegation::standard(2).unwrap()).is_err());
        assert!(branch_consistency(&square(2), 5).is_err());
    }

    #[test]
    fn preserving_equivalences() {
        let std3 = vec![UnitNegation::standard(); 3];
        let id = preserving_equivalence(&UnitAutomorphism::identity(), &std3, 11).unwrap();
        assert!(id.unit_level && id.n_level && id.report.passed());
        let sq = preserving_equivalence(&UnitAutomorphism::power(2.0).unwrap(), &std3, 11).unwrap();
        assert!(!sq.unit_level && !sq.n_level && sq.report.passed());
        let rho = rho_n(&two_x_squared(), &UnitNegation::standard()).unwrap();
        let r = preserving_equivalence(&rho, &std3, 11).unwrap();
        assert!(r.unit_level && r.n_level);
        let bad = is_nd_preserving(&square(2), &NDimNegation::standard(2).unwrap(), 11).unwrap();
        assert_eq!(bad.verdict, Verdict::Fail);
    }

    #[test]
    fn continuity_heuristic() {
        assert!(square(2).discontinuity(11, 3).passed());
        assert!(NDimNegation::standard(2).unwrap().discontinuity(11, 3).passed());
        let b = NDimNegation::bottom(2).unwrap().discontinuity(11, 3);
        assert_eq!(b.verdict, Verdict::Fail);
        assert_eq!(b.witness.unwrap()["suspected_jump_at"], json!([0.0, 0.0]));
    }

    #[test]
    fn json_grammar() {
        let a = NDimAutomorphism::from_json(r#"{"kind":"from_unit","psi":{"kind":"power","p":2},"n":2}"#).unwrap();
        assert_eq!(a, square(2));
        let p = hand_phi_n(2);
        assert_eq!(NDimAutomorphism::from_json(&p.to_json()).unwrap(), p);
        let inv = NDimAutomorphism::from_json(&square(3).inverse().to_json()).unwrap();
        assert_eq!(inv, square(3).inverse());
        assert!(NDimAutomorphism::from_json(
            r#"{"kind":"phi_n","psi_e":{"kind":"identity"},"e":0.5,"neg":{"kind":"bottom_n","n":2}}"#
        )
        .is_err());
    }
}
