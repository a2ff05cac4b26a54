//! The upper simplex `L_n([0,1])`.
//!
//! An [`NDInterval`] is a nondecreasing n-tuple of membership degrees. The
//! componentwise order makes `L_n([0,1])` a bounded lattice with join and meet
//! given by componentwise max and min. Order tests on stored values are exact;
//! tolerance only enters where computed outputs are compared (see the `*_tol`
//! helpers used by the property deciders).

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An element of `L_n([0,1])`: `0 ≤ x₁ ≤ … ≤ xₙ ≤ 1`.
#[derive(Clone, PartialEq)]
pub struct NDInterval<T> {
    values: Vec<T>,
}

impl<T: Scalar> NDInterval<T> {
    /// Builds an interval from an already sorted tuple.
    ///
    /// Values outside `[0,1]` by less than [`Scalar::slack`] are clamped; any
    /// larger excursion, a NaN, or a decreasing step is rejected. Unsorted
    /// input is never rearranged silently; use [`NDInterval::sort_to_simplex`].
    pub fn new(values: Vec<T>) -> Result<Self> {
        let values = clamp_range(values)?;
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::Domain(format!(
                "not in L_{}: component {} ({}) exceeds component {} ({})",
                values.len(),
                i + 1,
                values[i],
                i + 2,
                values[i + 1]
            )));
        }
        Ok(Self { values })
    }

    /// Builds an interval from a computed tuple, repairing ordering inversions
    /// no larger than [`Scalar::slack`] (rounding in bisection-backed inverses).
    pub fn from_computed(values: Vec<T>) -> Result<Self> {
        let mut values = clamp_range(values)?;
        for i in 1..values.len() {
            if values[i] < values[i - 1] {
                if values[i - 1] - values[i] > T::slack() {
                    return Err(Error::Domain(format!(
                        "computed tuple is not nondecreasing at component {}: {} > {}",
                        i,
                        values[i - 1],
                        values[i]
                    )));
                }
                values[i] = values[i - 1];
            }
        }
        Ok(Self { values })
    }

    /// The degenerate element `/c/ = (c, …, c)`.
    pub fn diag(c: T, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("dimension must be at least 1".into()));
        }
        if !(c >= T::zero() && c <= T::one()) {
            return Err(Error::Argument(format!("diagonal value {c} outside [0,1]")));
        }
        Ok(Self { values: vec![c; n] })
    }

    /// Nondecreasing rearrangement of an arbitrary tuple in `[0,1]ⁿ` (a stable sort).
    pub fn sort_to_simplex(tuple: &[T]) -> Result<Self> {
        let mut values = clamp_range(tuple.to_vec())?;
        values.sort_by(|a, b| a.partial_cmp(b).expect("NaN rejected by clamp_range"));
        Ok(Self { values })
    }

    /// The raw tuple, forgetting the simplex structure.
    pub fn unpack(&self) -> Vec<T> {
        self.values.clone()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `π_i(x)` with 1-based `i`.
    pub fn project(&self, i: usize) -> Result<T> {
        if i == 0 || i > self.dim() {
            return Err(Error::Argument(format!(
                "projection index {i} outside 1..={}",
                self.dim()
            )));
        }
        Ok(self.values[i - 1])
    }

    /// Componentwise order.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.same_dim(other)?;
        Ok(leq_tol(&self.values, &other.values, T::zero()))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            values: zip_with(&self.values, &other.values, T::max),
        })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(Self {
            values: zip_with(&self.values, &other.values, T::min),
        })
    }

    /// `x ⊆_i y`: `π_i(y) ≤ π_i(x) ≤ π_{i+1}(x) ≤ π_{i+1}(y)`, for `1 ≤ i ≤ n−1`.
    pub fn subset_i(&self, other: &Self, i: usize) -> Result<bool> {
        self.same_dim(other)?;
        if i == 0 || i >= self.dim() {
            return Err(Error::Argument(format!(
                "subset index {i} outside 1..={}",
                self.dim().saturating_sub(1)
            )));
        }
        Ok(subset_tol(&self.values, &other.values, i, T::zero()))
    }

    pub fn is_degenerate(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `max − min` of the components.
    pub fn spread(&self) -> T {
        self.values[self.dim() - 1] - self.values[0]
    }

    /// Converts into another scalar type.
    pub fn cast<U: Scalar>(&self) -> NDInterval<U> {
        NDInterval {
            values: self.values.iter().map(|v| U::lit(v.to_f64_lossy())).collect(),
        }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::Argument(format!(
                "dimension mismatch: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(())
    }
}

fn clamp_range<T: Scalar>(mut values: Vec<T>) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::Argument("dimension must be at least 1".into()));
    }
    let slack = T::slack();
    for (i, v) in values.iter_mut().enumerate() {
        if v.is_nan() || *v < -slack || *v > T::one() + slack {
            return Err(Error::Domain(format!(
                "component {} ({}) outside [0,1]",
                i + 1,
                v
            )));
        }
        *v = crate::scalar::clamp_unit(*v, T::zero(), T::one());
    }
    Ok(values)
}

fn zip_with<T: Copy>(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// `a ≤ b` componentwise with slack `tol` on each comparison.
pub(crate) fn leq_tol<T: Scalar>(a: &[T], b: &[T], tol: T) -> bool {
    a.iter().zip(b).all(|(&x, &y)| x <= y + tol)
}

/// `a ⊆_i b` (1-based `i`) with slack `tol` on each link of the chain.
pub(crate) fn subset_tol<T: Scalar>(a: &[T], b: &[T], i: usize, tol: T) -> bool {
    b[i - 1] <= a[i - 1] + tol && a[i - 1] <= a[i] + tol && a[i] <= b[i] + tol
}

/// `‖a − b‖∞`.
pub(crate) fn sup_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}

impl<T: Scalar> fmt::Debug for NDInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("NDInterval").field(&self.values).finish()
    }
}

/// Comma-separated components, each with 12 significant digits.
impl<T: Scalar> fmt::Display for NDInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|v| format_significant(v.to_f64_lossy(), 12))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Formats `v` with `digits` significant digits, trimming trailing zeros.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let mut s = format!("{v:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Parses `"0.1,0.4,0.9"` or the degenerate shorthand `"/0.3/:n"`.
impl<T: Scalar> FromStr for NDInterval<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse = |t: &str| -> Result<T> {
            t.trim()
                .parse::<f64>()
                .map(T::lit)
                .map_err(|e| Error::Parse(format!("bad number {t:?}: {e}")))
        };
        if let Some(rest) = s.strip_prefix('/') {
            let (value, count) = rest
                .split_once("/:")
                .ok_or_else(|| Error::Parse(format!("expected /c/:n, got {s:?}")))?;
            let n: usize = count
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad dimension {count:?}: {e}")))?;
            let c = parse(value)?;
            return Self::diag(c, n).map_err(|e| match e {
                Error::Argument(m) => Error::Domain(m),
                other => other,
            });
        }
        if s.is_empty() {
            return Err(Error::Parse("empty interval".into()));
        }
        let values = s.split(',').map(parse).collect::<Result<Vec<T>>>()?;
        Self::new(values)
    }
}

impl<T: Scalar + Serialize> Serialize for NDInterval<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.values.len()))?;
        for v in &self.values {
            seq.serialize_element(v)?;
        }
        seq.end()
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for NDInterval<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<T>::deserialize(deserializer)?;
        Self::new(values).map_err(de::Error::custom)
    }
}

/// All points of `L_n([0,1])` whose coordinates lie on the `m`-point grid
/// `{0, 1/(m−1), …, 1}`, in lexicographic order.
#[derive(Clone)]
pub struct SimplexGrid<T> {
    dim: usize,
    resolution: usize,
    coords: Vec<T>,
    points: Vec<NDInterval<T>>,
}

impl<T: Scalar> fmt::Debug for SimplexGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplexGrid")
            .field("dim", &self.dim)
            .field("resolution", &self.resolution)
            .field("points", &self.points.len())
            .finish()
    }
}

impl<T: Scalar> SimplexGrid<T> {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("grid dimension must be at least 1".into()));
        }
        if m < 2 {
            return Err(Error::Argument("grid resolution must be at least 2".into()));
        }
        let coords = unit_grid::<T>(m);
        let mut points = Vec::with_capacity(simplex_point_count(n, m) as usize);
        let mut idx = vec![0usize; n];
        loop {
            points.push(NDInterval {
                values: idx.iter().map(|&k| coords[k]).collect(),
            });
            // next nondecreasing index tuple in lexicographic order
            let Some(pos) = (0..n).rev().find(|&p| idx[p] < m - 1) else {
                break;
            };
            let v = idx[pos] + 1;
            for slot in &mut idx[pos..] {
                *slot = v;
            }
        }
        Ok(Self {
            dim: n,
            resolution: m,
            coords,
            points,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// The shared axis coordinates `k/(m−1)`.
    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn points(&self) -> &[NDInterval<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The grid's degenerate points `/k/(m−1)/`.
    pub fn diagonal(&self) -> Vec<NDInterval<T>> {
        self.coords
            .iter()
            .map(|&c| NDInterval {
                values: vec![c; self.dim],
            })
            .collect()
    }
}

/// `{0, 1/(m−1), …, 1}`, each coordinate computed once.
pub(crate) fn unit_grid<T: Scalar>(m: usize) -> Vec<T> {
    let denom = (m - 1) as f64;
    (0..m).map(|k| T::lit(k as f64 / denom)).collect()
}

/// `binomial(m+n−1, n)`: the number of nondecreasing n-tuples over m values.
pub fn simplex_point_count(n: usize, m: usize) -> u128 {
    let (top, k) = ((m + n - 1) as u128, n as u128);
    (0..k).fold(1u128, |acc, j| acc * (top - j) / (j + 1))
}
