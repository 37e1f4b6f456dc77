//! Scalar abstraction for the numeric kernels.
//!
//! Loss and metric math is written once, generic over [`Scalar`], and
//! instantiated as `f64` (see [`crate::Real`]) by the rest of the crate.
//! `f32` stays available for callers that trade precision for throughput.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Convert an `f64` literal/constant into the scalar type.
#[inline]
pub fn lit<S: Scalar>(value: f64) -> S {
    S::from_f64(value).expect("f64 literal must convert into the scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lit_round_trips_for_both_floats() {
        assert_eq!(lit::<f64>(0.25), 0.25);
        assert_eq!(lit::<f32>(0.25), 0.25f32);
    }
}
