//! Scalar abstraction for the numeric core.
//!
//! Every quantity that is not a count (coordinates, distances, decay factors,
//! utilisation ratios, Lorenz coordinates, inequality indices) is generic over
//! [`Scalar`], so the same code runs in `f32` or `f64`. Counts (populations,
//! incidence, separations) stay `u64` throughout. The crate root exposes `f64`
//! aliases, which is the precision the CLI and the file formats use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + 'static {
    /// Converts an `f64` configuration value into this scalar type.
    fn from_config(value: f64) -> Self {
        Self::from_f64(value).expect("finite f64 must convert to a supported scalar")
    }

    /// Converts a count into this scalar type, saturating on overflow.
    fn from_count(count: u64) -> Self {
        Self::from_u64(count).unwrap_or_else(Self::max_value)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Rounds to the nearest integer count, halves away from zero.
///
/// Negative inputs clamp to zero; values beyond `u64::MAX` saturate.
pub fn round_to_count<S: Scalar>(value: S) -> u64 {
    value.round().to_u64().unwrap_or_else(|| {
        if value > S::zero() {
            u64::MAX
        } else {
            0
        }
    })
}
