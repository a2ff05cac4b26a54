//! Seeded generators of negations and automorphisms.
//!
//! All randomness flows from a `ChaCha8Rng` seeded by the caller, so every
//! generated object is a pure function of `(seed, kind, n)`.

use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ndim_automorphism::NDimAutomorphism;
use crate::ndim_negation::NDimNegation;
use crate::unit_automorphism::UnitAutomorphism;
use crate::unit_negation::UnitNegation;

/// Interior knots of generated piecewise-linear maps.
pub const KNOTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// `Ñ` for one random piecewise-linear `N`.
    Random,
    /// `𝒩_S^{ψ̃}` for a random piecewise-linear `ψ`.
    Strong,
    /// `Ñ₁…Ñₙ` for a random chain `N₁ ≤ … ≤ Nₙ`.
    Representable,
    /// `Collapse(N)` for a random `N`; representable only when `n = 1`.
    NonRepresentable,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random" => Ok(Self::Random),
            "strong" => Ok(Self::Strong),
            "representable" => Ok(Self::Representable),
            "non_representable" => Ok(Self::NonRepresentable),
            other => Err(Error::Argument(format!(
                "unknown generator kind '{other}' (expected random, strong, representable, non_representable)"
            ))),
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Minimum spacing between consecutive knots (endpoints included).
pub const MIN_GAP: f64 = 0.04;

/// Strictly increasing sample of `k` points in `(0,1)` whose spacings,
/// including those to `0` and `1`, are all at least [`MIN_GAP`].
fn sorted_knots(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let weights: Vec<f64> = (0..=k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = weights.iter().sum();
    let free = 1.0 - MIN_GAP * (k + 1) as f64;
    let mut acc = 0.0;
    weights[..k]
        .iter()
        .map(|w| {
            acc += MIN_GAP + free * w / total;
            acc
        })
        .collect()
}

/// Random piecewise-linear negation: sorted interior knots, values sorted
/// decreasing, endpoints pinned at `(0,1)` and `(1,0)`.
pub fn random_negation(rng: &mut impl Rng) -> UnitNegation {
    let xs = sorted_knots(rng, KNOTS);
    let ys = decreasing_values(rng);
    pwl_negation(&xs, &ys)
}

/// Random piecewise-linear automorphism of `[0,1]`, averaged with the
/// identity so every slope lies in `[1/2, 1/2 + 1/(2·MIN_GAP)]`.
pub fn random_automorphism(rng: &mut impl Rng) -> UnitAutomorphism {
    let xs = sorted_knots(rng, KNOTS);
    let ys: Vec<f64> = sorted_knots(rng, KNOTS).iter().zip(&xs).map(|(u, x)| 0.5 * (u + x)).collect();
    let mut points = vec![(0.0, 0.0)];
    points.extend(xs.into_iter().zip(ys));
    points.push((1.0, 1.0));
    UnitAutomorphism::pwl(points).expect("sorted knots give an automorphism")
}

/// Random chain `N₁ ≤ … ≤ Nₙ` sharing one set of knots; each value vector is
/// the running pointwise maximum of independent decreasing samples.
pub fn random_chain(rng: &mut impl Rng, n: usize) -> Vec<UnitNegation> {
    let xs = sorted_knots(rng, KNOTS);
    let mut current = decreasing_values(rng);
    let mut chain = vec![pwl_negation(&xs, &current)];
    for _ in 1..n {
        let next = decreasing_values(rng);
        current = current.iter().zip(&next).map(|(a, b)| a.max(*b)).collect();
        chain.push(pwl_negation(&xs, &current));
    }
    chain
}

/// Random strong negation `ψ⁻¹(1 − ψ(x))`.
pub fn random_strong_negation(rng: &mut impl Rng) -> UnitNegation {
    UnitNegation::from_automorphism(random_automorphism(rng)).expect("unit-domain generator")
}

/// Random automorphism of `[0,e]`, rescaled from `[0,1]`.
pub fn random_automorphism_on(rng: &mut impl Rng, e: f64) -> Result<UnitAutomorphism> {
    UnitAutomorphism::rescaled(random_automorphism(rng), e)
}

fn decreasing_values(rng: &mut impl Rng) -> Vec<f64> {
    let mut ys: Vec<f64> = (0..KNOTS).map(|_| rng.gen_range(0.0..=1.0)).collect();
    ys.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    ys
}

fn pwl_negation(xs: &[f64], ys: &[f64]) -> UnitNegation {
    let mut points = vec![(0.0, 1.0)];
    points.extend(xs.iter().copied().zip(ys.iter().copied()));
    points.push((1.0, 0.0));
    UnitNegation::pwl(points).expect("sorted knots give a negation")
}

/// Generates an n-dimensional negation of the requested kind from `seed`.
pub fn gen_negation(seed: u64, kind: GenKind, n: usize) -> Result<NDimNegation> {
    if n == 0 {
        return Err(Error::Argument("dimension must be at least 1".into()));
    }
    let mut r = rng(seed);
    gen_negation_with(&mut r, kind, n)
}

pub fn gen_negation_with(rng: &mut impl Rng, kind: GenKind, n: usize) -> Result<NDimNegation> {
    match kind {
        GenKind::Random => NDimNegation::tilde(random_negation(rng), n),
        GenKind::Strong => {
            NDimNegation::strong_from_auto(NDimAutomorphism::from_unit(random_automorphism(rng), n)?)
        }
        GenKind::Representable => NDimNegation::representable(random_chain(rng, n)),
        GenKind::NonRepresentable => NDimNegation::collapse(random_negation(rng), n),
    }
}
