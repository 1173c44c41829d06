//! Directions at a point of an analytic spacetime: angles between future
//! timelike geodesics, exponential and logarithmic maps, the chronology
//! threshold, direction midpoints and tangent-cone blow-ups.
//!
//! A direction is stored as a unit future timelike tangent in ambient
//! coordinates. Two directions count as equal when their estimated angle is
//! at most [`SAME_DIRECTION`].

mod angle;
mod blowup;
mod midpoint;

pub use angle::{angle_estimate, angle_estimate_with, theta_monotonicity, AngleGrid, GridSpec, MonotonicityVerdict};
pub use blowup::{blowup_table, BlowupItem, BlowupRow, BlowupTable, ConeFourPoint};
pub use midpoint::{direction_midpoint, midpoint_cauchy, CauchyReport, DirectionMidpoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorspace::{ambient_exp, ambient_initial_tangent, ambient_tau, AmbientKind, AmbientSpec};
use crate::model2d::CausalClass;
use crate::scalar::{acosh1p, lin3, sub3, Scalar, Vec3};

pub const SAME_DIRECTION: f64 = 1e-6;

/// A unit future timelike tangent `u` at `p`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DirectionSample<T> {
    pub ambient: AmbientSpec<T>,
    pub p: Vec3<T>,
    pub u: Vec3<T>,
}

/// Whether the tangent `u` at `p` points to the future of the ambient.
fn is_future<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, u: &Vec3<T>) -> bool {
    match spec.kind {
        AmbientKind::Minkowski2 | AmbientKind::Minkowski3 | AmbientKind::DeSitter2 => u[0] > T::zero(),
        AmbientKind::AntiDeSitter2 => p[0] * u[1] - p[1] * u[0] > T::zero(),
    }
}

impl<T: Scalar> DirectionSample<T> {
    pub fn new(ambient: AmbientSpec<T>, p: Vec3<T>, u: Vec3<T>) -> Result<Self> {
        ambient.check_point(&p)?;
        let tol = T::lit(1e-9);
        let norm = ambient.inner(&u, &u);
        if !((norm - T::one()).abs() <= tol) {
            return Err(Error::Domain(format!("direction is not unit timelike: g(u, u) = {norm}")));
        }
        if !ambient.kind.is_flat() {
            let tangency = ambient.inner(&p, &u) / (ambient.scale * ambient.scale);
            if !(tangency.abs() <= tol) {
                return Err(Error::Domain(format!("direction is not tangent at p: <p, u>/s² = {tangency}")));
            }
        }
        if !is_future(&ambient, &p, &u) {
            return Err(Error::Causality("direction is past-directed".into()));
        }
        Ok(Self { ambient, p, u })
    }

    /// Direction at the ambient origin with rapidity `rho` towards the
    /// spatial unit vector at polar angle `phi`; two-dimensional kinds
    /// ignore `phi` and use the sign of `rho`.
    pub fn from_rapidity(ambient: AmbientSpec<T>, rho: T, phi: T) -> Result<Self> {
        let axes = ambient.space_axes();
        let spatial = match axes.get(1) {
            Some(y) => lin3(phi.cos(), &axes[0], phi.sin(), y),
            None => axes[0],
        };
        let u = lin3(rho.cosh(), &ambient.time_axis(), rho.sinh(), &spatial);
        Self::new(ambient, ambient.origin(), u)
    }

    /// Point at proper time `r` along the geodesic in this direction.
    pub fn point(&self, r: T) -> Result<Vec3<T>> {
        exp_map(&self.ambient, &self.p, r, self)
    }
}

fn same_base<T: Scalar>(d1: &DirectionSample<T>, d2: &DirectionSample<T>) -> Result<()> {
    if d1.ambient != d2.ambient || d1.p != d2.p {
        return Err(Error::Domain("directions live at different base points".into()));
    }
    Ok(())
}

/// The smooth angle `arccosh g(u1, u2)`, evaluated through `g(u1 − u2, u1 − u2)`
/// to keep small angles accurate.
pub fn smooth_angle<T: Scalar>(d1: &DirectionSample<T>, d2: &DirectionSample<T>) -> Result<T> {
    same_base(d1, d2)?;
    let w = sub3(&d1.u, &d2.u);
    Ok(acosh1p(-d1.ambient.inner(&w, &w) / T::two()))
}

fn check_radius<T: Scalar>(ambient: &AmbientSpec<T>, r: T) -> Result<()> {
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(Error::Domain(format!("proper time must be a nonnegative real, got {r}")));
    }
    if r >= ambient.injectivity_bound() {
        return Err(Error::Domain(format!(
            "proper time {r} leaves the unique-geodesic region (bound {})",
            ambient.injectivity_bound()
        )));
    }
    Ok(())
}

/// `exp_p(r, d)`.
pub fn exp_map<T: Scalar>(ambient: &AmbientSpec<T>, p: &Vec3<T>, r: T, d: &DirectionSample<T>) -> Result<Vec3<T>> {
    if d.ambient != *ambient || d.p != *p {
        return Err(Error::Domain("direction is not based at p".into()));
    }
    check_radius(ambient, r)?;
    if r == T::zero() {
        return Ok(*p);
    }
    Ok(ambient_exp(ambient, p, &d.u, r))
}

/// `log_p(x) = (τ(p, x), direction of the realizer p → x)`.
pub fn log_map<T: Scalar>(ambient: &AmbientSpec<T>, p: &Vec3<T>, x: &Vec3<T>) -> Result<(T, DirectionSample<T>)> {
    let (tau, class) = ambient_tau(ambient, p, x)?;
    if class != CausalClass::TimelikeFuture {
        return Err(Error::Causality(format!("x is not in the timelike future of p ({class:?})")));
    }
    check_radius(ambient, tau)?;
    let u = ambient_initial_tangent(ambient, p, x)?;
    Ok((tau, DirectionSample::new(*ambient, *p, u)?))
}

/// Whether `exp(μ t, d1) ≪ exp(t, d2)`.
pub fn chronology_threshold<T: Scalar>(d1: &DirectionSample<T>, d2: &DirectionSample<T>, mu: T, t: T) -> Result<bool> {
    same_base(d1, d2)?;
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::Domain(format!("mu must lie in (0, 1), got {mu}")));
    }
    if !(t > T::zero()) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let a = d1.point(mu * t)?;
    let b = d2.point(t)?;
    Ok(ambient_tau(&d1.ambient, &a, &b)?.1 == CausalClass::TimelikeFuture)
}

/// The `μ` at which [`chronology_threshold`] flips from true to false,
/// located by bisection to width `tol`.
pub fn chronology_flip<T: Scalar>(d1: &DirectionSample<T>, d2: &DirectionSample<T>, t: T, tol: T) -> Result<T> {
    let (mut lo, mut hi) = (T::zero(), T::one());
    let probe = |mu: T| chronology_threshold(d1, d2, mu, t);
    let tiny = T::lit(1e-15);
    if !probe(tiny)? || probe(T::one() - tiny)? {
        return Err(Error::Numerical("chronology threshold does not flip on (0, 1)".into()));
    }
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (lo + hi) / T::two();
        if probe(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / T::two())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rapidity(spec: AmbientSpec<f64>, rho: f64) -> DirectionSample<f64> {
        DirectionSample::from_rapidity(spec, rho, 0.0).unwrap()
    }

    #[test]
    fn sample_validation() {
        let m2 = AmbientSpec::minkowski2();
        assert!(DirectionSample::new(m2, [0.0; 3], [1.0, 0.0, 0.0]).is_ok());
        assert!(DirectionSample::new(m2, [0.0; 3], [2.0, 0.0, 0.0]).is_err());
        assert!(matches!(DirectionSample::new(m2, [0.0; 3], [-1.0, 0.0, 0.0]), Err(Error::Causality(_))));
        let ads = AmbientSpec::anti_de_sitter(1.0).unwrap();
        let d = rapidity(ads, 0.4);
        assert!((ads.inner(&d.u, &d.u) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exp_zero_is_base_point() {
        for spec in [AmbientSpec::minkowski3(), AmbientSpec::de_sitter(1.0).unwrap()] {
            let d = rapidity(spec, 0.3);
            assert_eq!(exp_map(&spec, &d.p, 0.0, &d).unwrap(), d.p);
        }
    }

    #[test]
    fn flat_log_map() {
        let m3 = AmbientSpec::<f64>::minkowski3();
        let p = [0.0; 3];
        let x = [3.0, 1.0, 2.0];
        let (tau, d) = log_map(&m3, &p, &x).unwrap();
        assert!((tau - 2.0).abs() < 1e-15);
        assert_eq!(d.u, [1.5, 0.5, 1.0]);
        assert!(matches!(log_map(&m3, &p, &[1.0, 2.0, 0.0]), Err(Error::Causality(_))));
    }

    #[test]
    fn anti_de_sitter_domain() {
        let ads = AmbientSpec::anti_de_sitter(1.0).unwrap();
        let d = rapidity(ads, 0.0);
        assert!(matches!(d.point(4.0), Err(Error::Domain(_))));
    }

    #[test]
    fn chronology_examples() {
        let m2 = AmbientSpec::minkowski2();
        let (d1, d2) = (rapidity(m2, 0.0), rapidity(m2, 1.0));
        for t in [1e-3, 1.0, 50.0] {
            assert!(chronology_threshold(&d1, &d2, 0.3, t).unwrap());
            assert!(!chronology_threshold(&d1, &d2, 0.5, t).unwrap());
            assert!(chronology_threshold(&d1, &d2, 1e-9, t).unwrap());
        }
        let flip = chronology_flip(&d1, &d2, 1.0, 1e-12).unwrap();
        assert!((flip - (-1f64).exp()).abs() < 1e-9);
        assert!(chronology_threshold(&d1, &d2, 1.0, 1.0).is_err());
    }

    #[test]
    fn smooth_angle_is_rapidity_difference() {
        let m2 = AmbientSpec::minkowski2();
        let a = smooth_angle(&rapidity(m2, -0.2), &rapidity(m2, 0.5)).unwrap();
        assert!((a - 0.7).abs() < 1e-14);
    }
}
