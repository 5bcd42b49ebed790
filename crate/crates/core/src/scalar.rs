//! Scalar abstraction shared by every evaluator.
//!
//! All numerics in the crate are written against [`Real`], which is implemented
//! for `f32` and `f64`. Accuracy targets quoted in the docs refer to `f64`.

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal. Panics only if the target type cannot hold it,
    /// which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }

    #[inline]
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }

    #[inline]
    fn two_pi() -> Self {
        Self::TAU()
    }

    /// Lossy conversion used for error messages.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Reduces an angle into `(-π, π]`.
pub fn wrap_angle<T: Real>(x: T) -> T {
    let tau = T::two_pi();
    let mut y = x - tau * (x / tau).round();
    if y <= -T::PI() {
        y += tau;
    } else if y > T::PI() {
        y -= tau;
    }
    y
}

/// `1 - cos x`, computed as `2 sin²(x/2)` so that small arguments keep full
/// relative precision.
#[inline]
pub fn one_minus_cos<T: Real>(x: T) -> T {
    let h = (x * T::lit(0.5)).sin();
    T::lit(2.0) * h * h
}
