//! Scalar abstraction for the numeric kernels.
//!
//! Distances, replacement probabilities, error rates and coverage are all
//! plain field arithmetic, so they are written once over [`Real`] and
//! instantiated at `f32` or `f64`. The shipped pipeline and every file
//! format use the crate-root [`crate::Score`] alias (`f64`).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::AddAssign;

pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + AddAssign + Sum + Debug + Display + Send + Sync
{
    /// Lossless conversion from a count; counts in this crate stay far below
    /// 2^52 so the cast is exact for both f32-range and f64 use.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}
