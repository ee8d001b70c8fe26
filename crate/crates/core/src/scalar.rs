//! Scalar abstractions.
//!
//! Two families of numbers appear in this crate. The commutator algebra only
//! needs a field with exact equality, so it works over [`AlgebraScalar`]
//! (rationals for exact checks, floats for quick ones). Everything that
//! touches a grid needs transcendental functions and an FFT, so it works over
//! [`Real`] (`f32` or `f64`).

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};
use rustfft::FftNum;

/// Coefficient type for linear forms in canonical operators.
pub trait AlgebraScalar:
    Clone + PartialEq + Num + Neg<Output = Self> + ToPrimitive + Debug + Display + Send + Sync
{
}

impl<T> AlgebraScalar for T where
    T: Clone + PartialEq + Num + Neg<Output = T> + ToPrimitive + Debug + Display + Send + Sync
{
}

/// Floating point type used by the grid engine: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + FftNum + Sum + Default + Display + Debug
{
    /// Converts an `f64` literal. Infallible for the supported float types.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("float literal representable")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable as float")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
