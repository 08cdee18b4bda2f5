use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};

/// Floating-point scalar the toolkit is generic over (`f32` or `f64`).
pub trait Scalar: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FloatConst + Debug + Display + Send + Sync + 'static {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn cast<T: Scalar>(value: f64) -> T {
    T::from(value).expect("literal must be representable in the working scalar")
}
