//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar usable with the dense solvers.
///
/// Math methods come from [`RealField`]; `num-traits` supplies constants and
/// lossless-enough conversions to and from `f64`.
pub trait Real:
    RealField + Copy + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + LowerExp
{
    /// Converts an `f64` literal into this scalar.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    fn usize(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable")
    }

    fn f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Unit roundoff of the type.
    fn epsilon() -> Self;
}

impl Real for f64 {
    fn epsilon() -> Self {
        f64::EPSILON
    }
}

impl Real for f32 {
    fn epsilon() -> Self {
        f32::EPSILON
    }
}
