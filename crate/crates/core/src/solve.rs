//! Bracketing solvers: inversion of increasing maps and fixed points of
//! decreasing maps. Both rely on monotonicity only, so they converge for every
//! expression the crate can build.

use crate::scalar::Scalar;

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// Solves `f(t) = y` for an increasing `f` on `[lo, hi]`, to bracket width `tol`.
///
/// Targets at or beyond the endpoint values return the endpoint exactly, so
/// boundary conditions survive inversion bit-for-bit.
pub fn invert_increasing<T: Scalar>(
    f: impl Fn(T) -> T,
    y: T,
    lo: T,
    hi: T,
    tol: T,
    max_iter: usize,
) -> T {
    if y <= f(lo) {
        return lo;
    }
    if y >= f(hi) {
        return hi;
    }
    let (mut a, mut b) = (lo, hi);
    let two = T::lit(2.0);
    for _ in 0..max_iter {
        if b - a <= tol {
            break;
        }
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        let v = f(mid);
        if v == y {
            return mid;
        }
        if v < y {
            a = mid;
        } else {
            b = mid;
        }
    }
    a + (b - a) / two
}

/// Outcome of a fixed-point bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint<T> {
    pub point: T,
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Bisection on `g(x) = f(x) − x` over `[0,1]` for a nonincreasing `f`.
///
/// Stops as soon as `|g| ≤ tol`, or when the bracket can no longer shrink;
/// in the latter case the best midpoint is returned with `converged` set by
/// the final residual.
pub fn fixed_point_decreasing<T: Scalar>(
    f: impl Fn(T) -> T,
    tol: T,
    max_iter: usize,
) -> FixedPoint<T> {
    let g = |x: T| f(x) - x;
    let (mut a, mut b) = (T::zero(), T::one());
    let two = T::lit(2.0);
    let mut best = (T::lit(0.5), g(T::lit(0.5)).abs());
    for iteration in 1..=max_iter {
        let mid = a + (b - a) / two;
        let v = g(mid);
        if v.abs() < best.1 {
            best = (mid, v.abs());
        }
        if v.abs() <= tol {
            return FixedPoint {
                point: mid,
                residual: v.abs(),
                iterations: iteration,
                converged: true,
            };
        }
        if v > T::zero() {
            a = mid;
        } else {
            b = mid;
        }
        let next = a + (b - a) / two;
        if next <= a || next >= b {
            return FixedPoint {
                point: best.0,
                residual: best.1,
                iterations: iteration,
                converged: best.1 <= tol,
            };
        }
    }
    FixedPoint {
        point: best.0,
        residual: best.1,
        iterations: max_iter,
        converged: best.1 <= tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverts_square() {
        let r = invert_increasing(|x: f64| x * x, 0.36, 0.0, 1.0, 1e-12, 200);
        assert!((r - 0.6).abs() < 1e-12);
        assert_eq!(invert_increasing(|x: f64| x * x, 0.0, 0.0, 1.0, 1e-12, 200), 0.0);
        assert_eq!(invert_increasing(|x: f64| x * x, 1.0, 0.0, 1.0, 1e-12, 200), 1.0);
    }

    #[test]
    fn fixed_point_of_standard_negation() {
        let fp = fixed_point_decreasing(|x: f64| 1.0 - x, 1e-12, 200);
        assert!(fp.converged);
        assert_eq!(fp.point, 0.5);
    }

    #[test]
    fn fixed_point_of_quadratic_negation() {
        let fp = fixed_point_decreasing(|x: f64| 1.0 - x * x, 1e-12, 200);
        assert!(fp.converged);
        assert!((fp.point - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn jump_without_fixed_point_does_not_converge() {
        let step = |x: f64| if x < 0.5 { 0.9 } else { 0.1 };
        let fp = fixed_point_decreasing(step, 1e-12, 200);
        assert!(!fp.converged);
    }
}
