use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar used throughout the crate: `f32` or `f64`.
///
/// The numerical tolerances quoted in the docs assume `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    #[doc(hidden)]
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    #[doc(hidden)]
    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[doc(hidden)]
    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    #[doc(hidden)]
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).unwrap()
    }

    #[doc(hidden)]
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + Debug
        + Display
        + LowerExp
        + Default
        + Send
        + Sync
        + 'static
{
}
