//! Scalar abstraction shared by every objective and algorithm.
//!
//! All real-valued quantities (objective values, marginals, thresholds,
//! weights) are carried as a `Scalar`. The trait is implemented for `f32`
//! and `f64`; `f64` is what the harness uses.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::Serialize;

pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Every `Scalar` can represent (an
    /// approximation of) any finite `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 fits every Scalar")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count fits every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Relative tolerance used by the checkers for this precision.
    fn rel_tol() -> Self;

    /// Absolute floor added to `rel_tol` near zero.
    fn abs_tol() -> Self;

    /// `a <= b` up to the checker tolerance.
    #[inline]
    fn approx_le(a: Self, b: Self) -> bool {
        a <= b + Self::tolerance(a, b)
    }

    #[inline]
    fn approx_eq(a: Self, b: Self) -> bool {
        (a - b).abs() <= Self::tolerance(a, b)
    }

    #[inline]
    fn tolerance(a: Self, b: Self) -> Self {
        Self::rel_tol() * a.abs().max(b.abs()) + Self::abs_tol()
    }
}

impl Scalar for f64 {
    fn rel_tol() -> Self {
        1e-9
    }
    fn abs_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn rel_tol() -> Self {
        1e-5
    }
    fn abs_tol() -> Self {
        1e-6
    }
}

/// Total order on scalars for sorting; NaN sorts as equal.
#[inline]
pub(crate) fn cmp_scalar<T: Scalar>(a: T, b: T) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}
