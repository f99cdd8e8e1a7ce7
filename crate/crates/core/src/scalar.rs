//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real floating-point type the operator algebra is generic over.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a count into this type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    /// Widens to `f64` for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance `base` (quoted for `f64`) rescaled to this type's precision.
    ///
    /// For `f64` this is `base` itself; coarser types get `base` inflated by
    /// the square root of the epsilon ratio.
    fn tol(base: f64) -> Self {
        let ratio = Self::epsilon().as_f64() / f64::EPSILON;
        Self::lit(base * ratio.sqrt().max(1.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over the crate scalar.
pub type C<R> = Complex<R>;

pub(crate) fn cx<R: Real>(re: R, im: R) -> C<R> {
    Complex::new(re, im)
}

pub(crate) fn creal<R: Real>(re: R) -> C<R> {
    Complex::new(re, R::zero())
}
