//! Scalar abstraction shared by every module.
//!
//! All numerical code is written against [`Real`], which is blanket-implemented
//! for any IEEE float that `num-traits` understands. In practice that means
//! `f64` (the default everywhere) and `f32` (usable, with looser tolerances).

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar field used by the library.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64`, used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
}

/// Complex scalar over a [`Real`] field.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// `e^{i theta}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `sin(x)/x` with a series branch near the origin.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-6) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}
