//! Analytic ambient spacetimes with closed-form time separation and
//! geodesics. The two-dimensional kinds delegate to the model planes;
//! three-dimensional Minkowski space is handled directly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model2d::{self, CausalClass, CurvatureParam, ModelPoint};
use crate::scalar::{add3, lin3, scale3, sub3, Scalar, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AmbientKind {
    #[serde(rename = "minkowski-2")]
    Minkowski2,
    #[serde(rename = "minkowski-3")]
    Minkowski3,
    #[serde(rename = "desitter-2")]
    DeSitter2,
    #[serde(rename = "antidesitter-2")]
    AntiDeSitter2,
}

impl AmbientKind {
    pub fn name(self) -> &'static str {
        match self {
            AmbientKind::Minkowski2 => "minkowski-2",
            AmbientKind::Minkowski3 => "minkowski-3",
            AmbientKind::DeSitter2 => "desitter-2",
            AmbientKind::AntiDeSitter2 => "antidesitter-2",
        }
    }

    pub fn is_flat(self) -> bool {
        matches!(self, AmbientKind::Minkowski2 | AmbientKind::Minkowski3)
    }
}

impl fmt::Display for AmbientKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AmbientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minkowski-2" => Ok(AmbientKind::Minkowski2),
            "minkowski-3" => Ok(AmbientKind::Minkowski3),
            "desitter-2" => Ok(AmbientKind::DeSitter2),
            "antidesitter-2" => Ok(AmbientKind::AntiDeSitter2),
            other => Err(Error::Parse(format!("unknown ambient kind {other:?}"))),
        }
    }
}

/// An ambient spacetime: kind plus length scale (ignored for flat kinds).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbientSpec<T> {
    pub kind: AmbientKind,
    pub scale: T,
}

impl<T: Scalar> AmbientSpec<T> {
    pub fn new(kind: AmbientKind, scale: T) -> Result<Self> {
        if !kind.is_flat() && !(scale > T::zero() && scale.is_finite()) {
            return Err(Error::Domain(format!("{kind} needs a positive finite scale, got {scale}")));
        }
        Ok(Self { kind, scale })
    }

    pub fn minkowski2() -> Self {
        Self { kind: AmbientKind::Minkowski2, scale: T::one() }
    }

    pub fn minkowski3() -> Self {
        Self { kind: AmbientKind::Minkowski3, scale: T::one() }
    }

    pub fn de_sitter(scale: T) -> Result<Self> {
        Self::new(AmbientKind::DeSitter2, scale)
    }

    pub fn anti_de_sitter(scale: T) -> Result<Self> {
        Self::new(AmbientKind::AntiDeSitter2, scale)
    }

    /// Sectional curvature of the ambient.
    pub fn curvature(&self) -> T {
        match self.kind {
            AmbientKind::Minkowski2 | AmbientKind::Minkowski3 => T::zero(),
            AmbientKind::DeSitter2 => T::one() / (self.scale * self.scale),
            AmbientKind::AntiDeSitter2 => -T::one() / (self.scale * self.scale),
        }
    }

    /// Model plane of the two-dimensional kinds.
    pub fn model(&self) -> Option<CurvatureParam<T>> {
        match self.kind {
            AmbientKind::Minkowski3 => None,
            _ => Some(CurvatureParam::new(self.curvature()).expect("finite curvature")),
        }
    }

    /// Bilinear form on ambient vectors, timelike-positive.
    pub fn inner(&self, u: &Vec3<T>, v: &Vec3<T>) -> T {
        match self.model() {
            Some(m) => m.inner(u, v),
            None => u[0] * v[0] - u[1] * v[1] - u[2] * v[2],
        }
    }

    /// Intrinsic coordinates to an ambient point. `y` is used only by
    /// three-dimensional Minkowski space.
    pub fn point_at(&self, t: T, x: T, y: T) -> Vec3<T> {
        match self.model() {
            Some(m) => m.point_at(t, x).coords,
            None => [t, x, y],
        }
    }

    pub fn check_point(&self, p: &Vec3<T>) -> Result<()> {
        match self.model() {
            Some(m) => m.check_point(&ModelPoint::new(*p)),
            None if p.iter().all(|c| c.is_finite()) => Ok(()),
            None => Err(Error::InvalidPoint { residual: f64::INFINITY }),
        }
    }

    /// Base point used by the direction experiments.
    pub fn origin(&self) -> Vec3<T> {
        match self.model() {
            Some(m) => m.origin().coords,
            None => [T::zero(); 3],
        }
    }

    /// Future unit tangent at [`Self::origin`].
    pub fn time_axis(&self) -> Vec3<T> {
        match self.model() {
            Some(m) => m.time_axis(),
            None => [T::one(), T::zero(), T::zero()],
        }
    }

    /// Orthonormal spacelike tangents at [`Self::origin`] (one for the
    /// two-dimensional kinds).
    pub fn space_axes(&self) -> Vec<Vec3<T>> {
        let (z, o) = (T::zero(), T::one());
        match self.model() {
            Some(m) => vec![m.space_axis()],
            None => vec![[z, o, z], [z, z, o]],
        }
    }

    /// Supremum of time separations along unique geodesics.
    pub fn injectivity_bound(&self) -> T {
        match self.kind {
            AmbientKind::AntiDeSitter2 => T::PI() * self.scale,
            _ => T::infinity(),
        }
    }
}

impl<T: Scalar> fmt::Display for AmbientSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_flat() {
            write!(f, "{}", self.kind)
        } else {
            write!(f, "{}(s={})", self.kind, self.scale)
        }
    }
}

/// Time separation magnitude and causal class of `(p, q)`.
pub fn ambient_tau<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, q: &Vec3<T>) -> Result<(T, CausalClass)> {
    match spec.model() {
        Some(m) => model2d::tau_model(&m, &ModelPoint::new(*p), &ModelPoint::new(*q)),
        None => {
            spec.check_point(p)?;
            spec.check_point(q)?;
            let d = sub3(q, p);
            let chord = spec.inner(&d, &d);
            Ok(if chord > T::zero() {
                let class = if d[0] > T::zero() { CausalClass::TimelikeFuture } else { CausalClass::TimelikePast };
                (chord.sqrt(), class)
            } else if chord == T::zero() {
                (T::zero(), CausalClass::Null)
            } else {
                (T::zero(), CausalClass::Spacelike)
            })
        }
    }
}

/// Time separation function: `τ(p, q)` when `p ≪ q`, else zero.
pub fn ambient_ordered_tau<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, q: &Vec3<T>) -> Result<T> {
    let (tau, class) = ambient_tau(spec, p, q)?;
    Ok(if class == CausalClass::TimelikeFuture { tau } else { T::zero() })
}

/// Point at proper time `u` along the geodesic from `p` to `q` (`p ≪ q`).
pub fn ambient_geodesic<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, q: &Vec3<T>, u: T) -> Result<Vec3<T>> {
    match spec.model() {
        Some(m) => Ok(model2d::geodesic_interpolate(&m, &ModelPoint::new(*p), &ModelPoint::new(*q), u)?.coords),
        None => {
            let (tau, class) = ambient_tau(spec, p, q)?;
            if class != CausalClass::TimelikeFuture {
                return Err(Error::Causality(format!("geodesic needs p ≪ q, pair is {class:?}")));
            }
            let slack = T::lit(model2d::REVERSE_SLACK) * tau;
            if !(u >= -slack && u <= tau + slack) {
                return Err(Error::Range { value: u.as_f64(), lo: 0.0, hi: tau.as_f64() });
            }
            if u <= T::zero() {
                return Ok(*p);
            }
            if u >= tau {
                return Ok(*q);
            }
            Ok(lin3(T::one() - u / tau, p, u / tau, q))
        }
    }
}

/// Geodesic from `p` with unit tangent `u`, evaluated at proper time `sigma`.
pub fn ambient_exp<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, u: &Vec3<T>, sigma: T) -> Vec3<T> {
    match spec.model() {
        Some(m) => model2d::exp_point(&m, &ModelPoint::new(*p), u, sigma).coords,
        None => add3(p, &scale3(sigma, u)),
    }
}

/// Unit tangent at `p` of the geodesic towards the timelike related `q`.
pub fn ambient_initial_tangent<T: Scalar>(spec: &AmbientSpec<T>, p: &Vec3<T>, q: &Vec3<T>) -> Result<Vec3<T>> {
    match spec.model() {
        Some(m) => model2d::initial_tangent(&m, &ModelPoint::new(*p), &ModelPoint::new(*q)),
        None => {
            let (tau, class) = ambient_tau(spec, p, q)?;
            if !class.is_timelike() {
                return Err(Error::Causality(format!("pair is {class:?}, not timelike")));
            }
            Ok(scale3(T::one() / tau, &sub3(q, p)))
        }
    }
}
