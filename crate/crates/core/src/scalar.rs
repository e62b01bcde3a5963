//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All linear algebra, contour quadrature and branch matching is written
//! against [`Real`], so the same code runs in `f32` and `f64`. Default
//! tolerances are tuned for `f64` and are floored by machine epsilon so
//! that single precision still gets meaningful (if looser) thresholds.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar used throughout the crate.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts to `f64` for reporting and serialization.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }

    /// `max(value, factor * epsilon)`: a tolerance that never drops below
    /// what the precision can resolve.
    fn tol(value: f64, factor: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(factor);
        Self::lit(value).max(floor)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over a [`Real`].
pub type Cplx<T> = Complex<T>;

pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}
