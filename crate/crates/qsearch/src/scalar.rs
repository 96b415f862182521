//! Scalar abstraction: all numerical kernels are generic over the floating
//! point type through [`Real`]. `f64` is the type the CLI and the concrete
//! aliases at the crate root use; `f32` is available for memory-bound
//! experiments (expect the tight tolerances elsewhere in the crate to be
//! meaningful only at `f64`).

use ndarray::ScalarOperand;
use num_complex::Complex;
use num_traits::{Float, FromPrimitive};
use rand::distr::uniform::SampleUniform;
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar usable by every module in this crate: dense
/// LAPACK eigensolves, FFTs, random sampling and serialization.
pub trait Real:
    Float
    + FromPrimitive
    + ndarray_linalg::Scalar<Real = Self>
    + ndarray_linalg::Lapack
    + rustfft::FftNum
    + SampleUniform
    + ScalarOperand
    + Serialize
    + DeserializeOwned
    + Default
    + std::fmt::Display
    + std::fmt::LowerExp
    + std::iter::Sum
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` constant into `T`. Panics only for exotic scalars that
/// cannot represent ordinary constants, which `f32`/`f64` always can.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable")
}

/// `e^{i theta}` without requiring `Complex::exp` bounds.
#[inline]
pub fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}
