//! Floating-point scalar abstraction.
//!
//! Everything numeric in this crate is written against [`Real`] so the same
//! code instantiates at `f32` and `f64`. Default tolerances follow the
//! double-precision contracts; callers instantiating at `f32` should widen
//! them through the per-module config structs.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, RemAssign, SubAssign};

use num_complex::Complex;
use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the library is generic over.
///
/// A blanket implementation covers every type with the listed bounds, which
/// in practice means `f32` and `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + AddAssign
    + RemAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion from an `f64` literal.
    ///
    /// Panics only when the target type cannot represent any approximation
    /// of the value, which does not happen for finite literals and the
    /// supported scalar types.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal must convert")
    }

    /// Conversion from a usize counter (exact for the sizes used here).
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize must convert to scalar")
    }

    /// Promote to a complex number with zero imaginary part.
    fn into_complex(self) -> Complex<Self> {
        Complex::new(self, Self::zero())
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + AddAssign
        + RemAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Sum
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}
