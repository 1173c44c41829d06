//! The hyperbolic plane `H²` as the upper sheet of `<u,u> = -1` for the form
//! `(-,+,+)`. Used for metric comparisons of cone bases and for the space of
//! directions of three-dimensional Minkowski space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{add3, lin3, scale3, sub3, Scalar, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint<T> {
    pub coords: Vec3<T>,
}

#[inline]
pub fn h2_inner<T: Scalar>(u: &Vec3<T>, v: &Vec3<T>) -> T {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

impl<T: Scalar> HPoint<T> {
    /// Validated constructor.
    pub fn new(coords: Vec3<T>) -> Result<Self> {
        let p = Self { coords };
        p.check()?;
        Ok(p)
    }

    pub fn base() -> Self {
        Self { coords: [T::one(), T::zero(), T::zero()] }
    }

    /// Point at distance `r` from the base point in direction `phi`.
    pub fn from_polar(r: T, phi: T) -> Self {
        let sh = r.sinh();
        Self { coords: [r.cosh(), sh * phi.cos(), sh * phi.sin()] }
    }

    pub fn check(&self) -> Result<()> {
        let residual = (h2_inner(&self.coords, &self.coords) + T::one()).abs();
        let tol = T::lit(1e-9).max(T::lit(64.0) * T::epsilon()) * self.coords[0].abs().max(T::one()).powi(2);
        if !(residual <= tol) || self.coords[0] < T::one() - tol {
            return Err(Error::InvalidPoint { residual: residual.as_f64() });
        }
        Ok(())
    }
}

/// Hyperbolic distance, computed from the chord for accuracy at short range.
pub fn h2_distance<T: Scalar>(u: &HPoint<T>, v: &HPoint<T>) -> T {
    let d = sub3(&u.coords, &v.coords);
    let chord = h2_inner(&d, &d).max(T::zero());
    T::two() * (chord.sqrt() / T::two()).asinh()
}

/// Point at fraction `f` of the way from `u` to `v` along their geodesic.
pub fn h2_geodesic<T: Scalar>(u: &HPoint<T>, v: &HPoint<T>, f: T) -> HPoint<T> {
    let d = h2_distance(u, v);
    if d == T::zero() {
        return *u;
    }
    let den = d.sinh();
    let coords = lin3(((T::one() - f) * d).sinh() / den, &u.coords, (f * d).sinh() / den, &v.coords);
    HPoint { coords }
}

/// Exact geodesic midpoint.
pub fn h2_midpoint<T: Scalar>(u: &HPoint<T>, v: &HPoint<T>) -> HPoint<T> {
    let s = add3(&u.coords, &v.coords);
    let n = (-h2_inner(&s, &s)).sqrt();
    HPoint { coords: scale3(T::one() / n, &s) }
}

/// Places a triangle with the given side lengths: `u1` at the base point,
/// `u2` along the first axis, `u3` in the upper half.
pub fn realize_h2_triangle<T: Scalar>(d12: T, d13: T, d23: T) -> Result<(HPoint<T>, HPoint<T>, HPoint<T>)> {
    let bad = || Error::InvalidMetricTriangle { d12: d12.as_f64(), d13: d13.as_f64(), d23: d23.as_f64() };
    if !(d12 >= T::zero() && d13 >= T::zero() && d23 >= T::zero()) {
        return Err(bad());
    }
    let slack = T::lit(1e-12) * (d12 + d13 + d23);
    let (f1, f2, f3) = (d23 - d12 + d13, d23 + d12 - d13, d12 + d13 - d23);
    if f1 < -slack || f2 < -slack || f3 < -slack {
        return Err(bad());
    }
    let u1 = HPoint::base();
    let u2 = HPoint::from_polar(d12, T::zero());
    if d12 == T::zero() || d13 == T::zero() {
        return Ok((u1, u2, HPoint::from_polar(d13, T::zero())));
    }
    // Half-angle form of the law of cosines at u1.
    let two = T::two();
    let sin2 = (f1.max(T::zero()) / two).sinh() * (f2.max(T::zero()) / two).sinh();
    let cos2 = ((d12 + d13 + d23) / two).sinh() * (f3.max(T::zero()) / two).sinh();
    let gamma = two * sin2.sqrt().atan2(cos2.sqrt());
    Ok((u1, u2, HPoint::from_polar(d13, gamma)))
}

/// Angle at `u` between the geodesics to `v` and `w`.
pub fn h2_angle<T: Scalar>(u: &HPoint<T>, v: &HPoint<T>, w: &HPoint<T>) -> Result<T> {
    let (a, b, c) = (h2_distance(u, v), h2_distance(u, w), h2_distance(v, w));
    if a == T::zero() || b == T::zero() {
        return Err(Error::DegenerateAngle);
    }
    let two = T::two();
    let sin2 = ((c - a + b) / two).sinh().max(T::zero()) * ((c + a - b) / two).sinh().max(T::zero());
    let cos2 = ((a + b + c) / two).sinh() * ((a + b - c) / two).sinh().max(T::zero());
    Ok(two * sin2.sqrt().atan2(cos2.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_examples() {
        let u = HPoint::<f64>::base();
        assert_eq!(h2_distance(&u, &u), 0.0);
        let v = HPoint::new([1f64.cosh(), 1f64.sinh(), 0.0]).unwrap();
        assert!((h2_distance(&u, &v) - 1.0).abs() < 1e-15);
        let w = HPoint::from_polar(0.8, 2.0);
        let (a, b, c) = (h2_distance(&u, &v), h2_distance(&v, &w), h2_distance(&u, &w));
        assert!(c <= a + b + 1e-12 && a <= b + c + 1e-12 && b <= a + c + 1e-12);
        assert!(HPoint::new([1.0, 1.0, 0.0]).is_err());
    }

    #[test]
    fn realization_reproduces_distances() {
        for &(a, b, c) in &[(1.0f64, 1.0, 1.0), (0.5, 2.0, 1.7), (1.0, 2.0, 1.0), (3.0, 0.2, 2.9)] {
            let (u1, u2, u3) = realize_h2_triangle(a, b, c).unwrap();
            assert!((h2_distance(&u1, &u2) - a).abs() < 1e-12);
            assert!((h2_distance(&u1, &u3) - b).abs() < 1e-12);
            assert!((h2_distance(&u2, &u3) - c).abs() < 1e-12);
        }
        assert!(matches!(realize_h2_triangle(1.0, 1.0, 2.5), Err(Error::InvalidMetricTriangle { .. })));
    }

    #[test]
    fn collinear_midpoint() {
        let (u1, u2, u3) = realize_h2_triangle(1.0f64, 1.0, 2.0).unwrap();
        let m = h2_midpoint(&u2, &u3);
        assert!((h2_distance(&m, &u2) - 1.0).abs() < 1e-12);
        assert!((h2_distance(&m, &u3) - 1.0).abs() < 1e-12);
        assert!(h2_distance(&m, &u1) < 1e-7);
        assert_eq!(h2_midpoint(&u2, &u2), u2);
    }

    #[test]
    fn equilateral_angle() {
        let (u1, u2, u3) = realize_h2_triangle(1.0, 1.0, 1.0).unwrap();
        let c1 = 1f64.cosh();
        let want = (c1 * (c1 - 1.0) / 1f64.sinh().powi(2)).acos();
        for (p, q, r) in [(u1, u2, u3), (u2, u3, u1), (u3, u1, u2)] {
            assert!((h2_angle(&p, &q, &r).unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_fraction() {
        let u = HPoint::from_polar(0.3f64, 1.0);
        let v = HPoint::from_polar(1.4, -0.5);
        let d = h2_distance(&u, &v);
        let g = h2_geodesic(&u, &v, 0.3);
        assert!((h2_distance(&u, &g) - 0.3 * d).abs() < 1e-12);
        assert!((h2_distance(&g, &v) - 0.7 * d).abs() < 1e-12);
    }
}
