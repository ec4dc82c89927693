//! Scalar abstraction: the real field underlying all complex arithmetic.
//!
//! Everything in this crate is generic over [`Scalar`] so the same code runs
//! at f32 and f64 precision; the crate root exports f64-backed aliases which
//! are what the CLI and the test suites use.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;
use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

/// Real scalar type: f32 or f64.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Display
    + LowerExp
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Draw one standard-normal sample.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Scalar for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

/// Convert an f64 constant into the working scalar type.
pub fn fl<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("constant not representable in scalar type")
}

/// Complex number from real-component constants.
pub fn cx<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(fl(re), fl(im))
}

/// A tolerance value floored at a small multiple of machine epsilon, so the
/// f64-oriented defaults stay meaningful at f32 precision.
pub fn tol_t<T: Scalar>(v: f64) -> T {
    let req: T = fl(v);
    let floor = T::epsilon() * fl(32.0);
    if req < floor {
        floor
    } else {
        req
    }
}
