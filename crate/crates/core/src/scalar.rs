//! Scalar abstraction shared by every evaluator in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type usable as a membership degree: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal or stored parameter into this type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Largest excursion outside `[0, 1]` (or out of order) that construction
    /// silently repairs. Anything larger is a data error.
    fn slack() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(8.0))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Clamps a computed value into `[lo, hi]`, treating last-bit excursions as rounding.
pub(crate) fn clamp_unit<T: Scalar>(v: T, lo: T, hi: T) -> T {
    if v < lo {
        lo
    } else if v > hi {
        hi
    } else {
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_is_tight_for_f64_and_wider_for_f32() {
        assert_eq!(<f64 as Scalar>::slack(), 1e-12);
        assert!(<f32 as Scalar>::slack() > 1e-12);
    }
}
