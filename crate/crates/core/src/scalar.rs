//! Floating-point scalar abstraction for the numeric (non-exact) layer.
//!
//! Everything that works with approximate reals — the symmetric
//! eigen-solver, the SDP primal/dual machinery, protocol evaluation — is
//! generic over [`Scalar`] so it runs unchanged at `f32` or `f64`. The
//! exact combinatorial layer uses [`crate::Rational`] instead and is not
//! generic. Concrete aliases at the crate root fix `f64` as the default.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; exact for `f64`, rounded for `f32`.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from(x).expect("f64 -> scalar conversion")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
