//! Scalar abstraction for all probability and amplitude arithmetic.
//!
//! Everything in this crate is generic over a real scalar `R` so the same
//! code runs at `f32` or `f64` precision. Concrete `f64` aliases live at the
//! crate root; the acceptance tolerances quoted throughout assume `f64`.

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real scalar field: `f32` or `f64` (or anything field-like with the same
/// trait surface).
pub trait Real:
    RealField + Copy + Default + FromPrimitive + ToPrimitive + std::iter::Sum + 'static
{
}

impl<T> Real for T where
    T: RealField + Copy + Default + FromPrimitive + ToPrimitive + std::iter::Sum + 'static
{
}

/// Complex amplitude over the scalar `R`.
pub type Cplx<R> = nalgebra::Complex<R>;

/// Convert an `f64` literal into the working scalar.
///
/// Panics only if `R` cannot represent ordinary finite literals, which no
/// supported scalar does.
#[inline]
pub fn r64<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("finite f64 literal must convert")
}

/// Convert a count into the working scalar.
#[inline]
pub fn rn<R: Real>(n: usize) -> R {
    R::from_usize(n).expect("usize must convert")
}

/// Scale a nominal `f64` tolerance so it stays meaningful for narrower
/// scalars: at `f64` the nominal value is returned unchanged, at `f32` the
/// machine epsilon dominates.
#[inline]
pub fn scaled_tol<R: Real>(nominal: f64) -> R {
    let eps_scaled = R::default_epsilon() * r64::<R>(nominal / f64::EPSILON).max(R::one());
    r64::<R>(nominal).max(eps_scaled.min(r64::<R>(nominal.sqrt())))
}

/// Normalization tolerance for probability vectors (1e-12 at `f64`).
#[inline]
pub fn normalization_tol<R: Real>() -> R {
    scaled_tol::<R>(1e-12)
}

/// Default tolerance for model checks (1e-9 at `f64`).
#[inline]
pub fn model_check_tol<R: Real>() -> R {
    scaled_tol::<R>(1e-9)
}

/// Tolerance for Hermiticity / positivity checks on operators (1e-10 at `f64`).
#[inline]
pub fn operator_tol<R: Real>() -> R {
    scaled_tol::<R>(1e-10)
}

/// Feasibility tolerance on LP residual infinity-norms (1e-7 at `f64`).
#[inline]
pub fn lp_tol<R: Real>() -> R {
    scaled_tol::<R>(1e-7)
}
