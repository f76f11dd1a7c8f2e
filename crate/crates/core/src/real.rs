//! Scalar abstraction for the closed-form parts of the library.

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the exact-formula modules are generic over.
///
/// `f32` works but the asymptotic identities are only meaningful near `f64`
/// precision; the crate-level aliases fix `f64`.
pub trait Real:
    Float + FromPrimitive + std::fmt::Debug + std::fmt::Display + std::ops::AddAssign + 'static
{
    fn pi() -> Self {
        Self::from_f64(std::f64::consts::PI).unwrap()
    }

    fn from_usize_(v: usize) -> Self {
        Self::from_usize(v).unwrap()
    }

    fn from_f64_(v: f64) -> Self {
        Self::from_f64(v).unwrap()
    }
}

impl Real for f32 {}
impl Real for f64 {}
