//! n-dimensional fuzzy negations on the upper simplex `L_n([0,1])`.
//!
//! The crate provides the simplex lattice ([`simplex`]), unary negations and
//! automorphisms as serializable expression trees ([`unit_negation`],
//! [`unit_automorphism`]), their n-dimensional counterparts
//! ([`ndim_negation`], [`ndim_automorphism`]), grid-based property deciders
//! and a theorem-check engine ([`verify`]), and finite n-dimensional fuzzy
//! sets ([`fuzzyset`]).
//!
//! Evaluation is generic over [`Scalar`] (`f32` or `f64`); the deciders work
//! in `f64`.

pub mod error;
pub mod fuzzyset;
pub mod ndim_automorphism;
pub mod ndim_negation;
pub mod scalar;
pub mod simplex;
pub mod solve;
pub mod unit_automorphism;
pub mod unit_negation;
pub mod verify;

pub use error::{Error, Result};
pub use fuzzyset::NDFuzzySet;
pub use ndim_automorphism::NDimAutomorphism;
pub use ndim_negation::{NDimNegation, RepresentabilityVerdict};
pub use scalar::Scalar;
pub use simplex::{NDInterval, SimplexGrid};
pub use unit_automorphism::UnitAutomorphism;
pub use unit_negation::{EquilibriumKind, EquilibriumResult, UnitNegation};
pub use verify::{PropertyReport, SuiteConfig, SuiteReport, Verdict};

/// Element of `L_n([0,1])` in double precision.
pub type Interval = NDInterval<f64>;
/// Element of `L_n([0,1])` in single precision.
pub type Interval32 = NDInterval<f32>;
pub type Grid = SimplexGrid<f64>;
pub type Grid32 = SimplexGrid<f32>;
