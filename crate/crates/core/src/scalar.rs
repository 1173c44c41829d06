//! Scalar abstraction shared by every geometric kernel in the crate.
//!
//! All formulas are written against [`Scalar`], so the same code runs in
//! `f64` (the default, used by the scans and the CLI) and in `f32` (handy for
//! quick low-precision sweeps). Tolerances are supplied by the caller.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type usable throughout the crate.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + LowerExp
    + Default
    + Sum
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts a literal; every literal used by the crate is representable.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable in scalar type")
    }

    /// Lossy view used for error messages and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Three-component vector used for ambient coordinates.
pub type Vec3<T> = [T; 3];

#[inline]
pub(crate) fn sub3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub(crate) fn add3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub(crate) fn scale3<T: Scalar>(k: T, a: &Vec3<T>) -> Vec3<T> {
    [k * a[0], k * a[1], k * a[2]]
}

/// `alpha * a + beta * b`.
#[inline]
pub(crate) fn lin3<T: Scalar>(alpha: T, a: &Vec3<T>, beta: T, b: &Vec3<T>) -> Vec3<T> {
    [alpha * a[0] + beta * b[0], alpha * a[1] + beta * b[1], alpha * a[2] + beta * b[2]]
}

#[inline]
pub(crate) fn cross3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> Vec3<T> {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub(crate) fn euclid_dist3<T: Scalar>(a: &Vec3<T>, b: &Vec3<T>) -> T {
    let d = sub3(a, b);
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// `acosh(1 + delta)` without the cancellation of forming `1 + delta` first.
#[inline]
pub(crate) fn acosh1p<T: Scalar>(delta: T) -> T {
    let delta = delta.max(T::zero());
    T::two() * (delta / T::two()).sqrt().asinh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acosh1p_matches_acosh() {
        for &x in &[0.0, 0.3, 2.5, 40.0] {
            let a: f64 = acosh1p(x);
            let b = (1.0 + x).acosh();
            assert!((a - b).abs() <= 1e-12 * (1.0 + b), "{x}: {a} vs {b}");
        }
        let tiny: f64 = acosh1p(1e-12);
        assert!((tiny - 2e-12f64.sqrt()).abs() <= 1e-12 * tiny);
        assert_eq!(acosh1p(-1e-18_f64), 0.0);
    }

    #[test]
    fn lit_round_trips_in_f32() {
        assert_eq!(<f32 as Scalar>::lit(0.25), 0.25f32);
        assert_eq!(<f64 as Scalar>::from_index(7), 7.0);
    }
}
