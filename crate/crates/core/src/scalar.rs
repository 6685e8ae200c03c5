//! Numeric abstraction shared by weights, distances, path counts and scores.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

/// Real scalar used for edge weights, tentative distances, path counts and
/// centrality scores: `f32` or `f64`.
///
/// Infinity is the "unreached" distance sentinel, which rules out exact
/// rational types.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + AddAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// `true` when `a` and `b` agree within `rel` relative tolerance. A zero
    /// tolerance is exact equality.
    #[inline]
    fn approx_eq(a: Self, b: Self, rel: Self) -> bool {
        if a == b {
            return true;
        }
        if rel == Self::zero() || !a.is_finite() || !b.is_finite() {
            return false;
        }
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    /// Converts from `f64`, saturating to infinity for out-of-range values.
    #[inline]
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(|| if v.is_sign_negative() { Self::neg_infinity() } else { Self::infinity() })
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
