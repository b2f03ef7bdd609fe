//! Floating-point scalar abstraction shared by evaluation, interval
//! arithmetic and the solver.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the numeric layers are generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative outward widening applied to every elementary interval result.
    fn widen_rel() -> Self;
    /// Absolute floor on the outward widening.
    fn widen_abs() -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }
}

impl Scalar for f64 {
    fn widen_rel() -> Self {
        1e-15
    }
    fn widen_abs() -> Self {
        1e-300
    }
}

impl Scalar for f32 {
    fn widen_rel() -> Self {
        f32::EPSILON
    }
    fn widen_abs() -> Self {
        f32::MIN_POSITIVE
    }
}
