//! The two-dimensional Lorentzian model planes `L²_K`.
//!
//! Points are stored in a three-dimensional ambient space:
//!
//! * `K = 0`: the flat plane, coordinates `(t, x, 0)`, form `(+,-,-)`.
//! * `K > 0`: de Sitter, the quadric `<p,p> = -s²` for the form `(+,-,-)`,
//!   with `cosh(τ/s) = -<p,q>/s²` on timelike pairs.
//! * `K < 0`: anti-de Sitter, the quadric `<p,p> = s²` for the form `(+,+,-)`,
//!   with `cos(τ/s) = <p,q>/s²`. Time is the angle `atan2(p1, p0)`; only pairs
//!   whose angular separation is below `π` are related (simply connected patch).
//!
//! In all three models timelike vectors have positive norm, so unit timelike
//! tangents satisfy `<u,u> = 1`. Time separations are computed from the chord
//! `q - p`, which stays accurate for short separations where `acosh` of the
//! inner product would not.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{acosh1p, add3, cross3, lin3, scale3, sub3, Scalar, Vec3};

/// Relative slack accepted on the reverse triangle inequality before a side
/// triple is rejected. Triples inside the slack are treated as collinear.
pub const REVERSE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Flat,
    DeSitter,
    AntiDeSitter,
}

/// Curvature `K` of a model plane together with its length scale and
/// timelike diameter.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureParam<T> {
    k: T,
    scale: T,
    diameter: T,
}

impl<T: Scalar> CurvatureParam<T> {
    pub fn new(k: T) -> Result<Self> {
        if !k.is_finite() {
            return Err(Error::Domain(format!("curvature must be finite, got {k}")));
        }
        let (scale, diameter) = if k == T::zero() {
            (T::infinity(), T::infinity())
        } else {
            let s = T::one() / k.abs().sqrt();
            let d = if k < T::zero() { T::PI() * s } else { T::infinity() };
            (s, d)
        };
        Ok(Self { k, scale, diameter })
    }

    pub fn flat() -> Self {
        Self::new(T::zero()).expect("zero curvature is valid")
    }

    pub fn k(&self) -> T {
        self.k
    }

    /// `1/√|K|`; infinite for the flat plane.
    pub fn scale(&self) -> T {
        self.scale
    }

    /// `π/√(-K)` for `K < 0`, infinite otherwise.
    pub fn diameter(&self) -> T {
        self.diameter
    }

    pub fn kind(&self) -> ModelKind {
        if self.k == T::zero() {
            ModelKind::Flat
        } else if self.k > T::zero() {
            ModelKind::DeSitter
        } else {
            ModelKind::AntiDeSitter
        }
    }

    /// Plane whose lengths are those of `self` multiplied by `lambda`; its
    /// curvature is `K/λ²`.
    pub fn rescaled(&self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(Error::Domain(format!("scale factor must be positive, got {lambda}")));
        }
        Self::new(self.k / (lambda * lambda))
    }

    /// Ambient bilinear form.
    #[inline]
    pub fn inner(&self, p: &Vec3<T>, q: &Vec3<T>) -> T {
        match self.kind() {
            ModelKind::AntiDeSitter => p[0] * q[0] + p[1] * q[1] - p[2] * q[2],
            _ => p[0] * q[0] - p[1] * q[1] - p[2] * q[2],
        }
    }

    fn quadric_target(&self) -> Option<T> {
        let s2 = self.scale * self.scale;
        match self.kind() {
            ModelKind::Flat => None,
            ModelKind::DeSitter => Some(-s2),
            ModelKind::AntiDeSitter => Some(s2),
        }
    }

    fn point_tolerance(&self) -> T {
        let base = T::lit(1e-9).max(T::lit(64.0) * T::epsilon());
        match self.kind() {
            ModelKind::Flat => base,
            _ => base * self.scale * self.scale,
        }
    }

    /// Rejects points that are not on the model quadric.
    pub fn check_point(&self, p: &ModelPoint<T>) -> Result<()> {
        if p.coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint { residual: f64::INFINITY });
        }
        match self.quadric_target() {
            None => {
                if p.coords[2].abs() > self.point_tolerance() {
                    return Err(Error::InvalidPoint { residual: p.coords[2].as_f64() });
                }
                Ok(())
            }
            Some(target) => {
                let residual = (self.inner(&p.coords, &p.coords) - target).abs();
                if residual > self.point_tolerance() {
                    Err(Error::InvalidPoint { residual: residual.as_f64() })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The base point of canonical placements.
    pub fn origin(&self) -> ModelPoint<T> {
        let z = T::zero();
        match self.kind() {
            ModelKind::Flat => ModelPoint::new([z, z, z]),
            ModelKind::DeSitter => ModelPoint::new([z, self.scale, z]),
            ModelKind::AntiDeSitter => ModelPoint::new([self.scale, z, z]),
        }
    }

    /// Future unit tangent at the origin.
    pub fn time_axis(&self) -> Vec3<T> {
        let (z, o) = (T::zero(), T::one());
        match self.kind() {
            ModelKind::AntiDeSitter => [z, o, z],
            _ => [o, z, z],
        }
    }

    /// Unit spacelike tangent at the origin; "nonnegative spatial
    /// coordinate" refers to this direction.
    pub fn space_axis(&self) -> Vec3<T> {
        let (z, o) = (T::zero(), T::one());
        match self.kind() {
            ModelKind::Flat => [z, o, z],
            _ => [z, z, o],
        }
    }

    /// Coordinate index carrying the spatial side of a point.
    fn side_index(&self) -> usize {
        match self.kind() {
            ModelKind::Flat => 1,
            _ => 2,
        }
    }

    /// Point with intrinsic coordinates `(time, space)`: the origin is
    /// `(0, 0)`, the time axis is `space = 0`, and `space` is proper
    /// distance along the spacelike geodesic through the origin.
    pub fn point_at(&self, time: T, space: T) -> ModelPoint<T> {
        let s = self.scale;
        match self.kind() {
            ModelKind::Flat => ModelPoint::new([time, space, T::zero()]),
            ModelKind::DeSitter => {
                let ch = (time / s).cosh();
                ModelPoint::new([s * (time / s).sinh(), s * ch * (space / s).cos(), s * ch * (space / s).sin()])
            }
            ModelKind::AntiDeSitter => {
                let ch = (space / s).cosh();
                ModelPoint::new([s * ch * (time / s).cos(), s * ch * (time / s).sin(), s * (space / s).sinh()])
            }
        }
    }
}

/// A point of a model plane in ambient coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelPoint<T> {
    pub coords: Vec3<T>,
}

impl<T: Scalar> ModelPoint<T> {
    pub fn new(coords: Vec3<T>) -> Self {
        Self { coords }
    }

    /// Flat-plane point `(t, x)`.
    pub fn flat(t: T, x: T) -> Self {
        Self::new([t, x, T::zero()])
    }
}

/// Causal character of an ordered pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    TimelikeFuture,
    TimelikePast,
    Null,
    Spacelike,
}

impl CausalClass {
    pub fn is_timelike(self) -> bool {
        matches!(self, CausalClass::TimelikeFuture | CausalClass::TimelikePast)
    }
}

/// Time separation and causal class of `(p, q)` in the model plane.
///
/// The returned value is the magnitude; use [`ordered_tau`] for the time
/// separation function `τ(p, q)` which vanishes unless `p ≪ q`.
pub fn tau_model<T: Scalar>(
    param: &CurvatureParam<T>,
    p: &ModelPoint<T>,
    q: &ModelPoint<T>,
) -> Result<(T, CausalClass)> {
    param.check_point(p)?;
    param.check_point(q)?;
    tau_unchecked(param, &p.coords, &q.coords)
}

pub(crate) fn tau_unchecked<T: Scalar>(
    param: &CurvatureParam<T>,
    p: &Vec3<T>,
    q: &Vec3<T>,
) -> Result<(T, CausalClass)> {
    let d = sub3(q, p);
    let chord = param.inner(&d, &d);
    if chord <= T::zero() {
        let class = if chord == T::zero() { CausalClass::Null } else { CausalClass::Spacelike };
        return Ok((T::zero(), class));
    }
    let s = param.scale;
    let (tau, future) = match param.kind() {
        ModelKind::Flat => (chord.sqrt(), d[0] > T::zero()),
        ModelKind::DeSitter => {
            let tau = T::two() * s * (chord.sqrt() / (T::two() * s)).asinh();
            (tau, d[0] > T::zero())
        }
        ModelKind::AntiDeSitter => {
            let sum = add3(p, q);
            let sum_norm = param.inner(&sum, &sum);
            if sum_norm <= T::zero() {
                return Err(Error::SizeBound { value: param.diameter.as_f64(), diameter: param.diameter.as_f64() });
            }
            let dtheta = q[1].atan2(q[0]) - p[1].atan2(p[0]);
            if dtheta.abs() >= T::PI() {
                return Err(Error::SizeBound { value: (dtheta.abs() * s).as_f64(), diameter: param.diameter.as_f64() });
            }
            let tau = T::two() * s * chord.sqrt().atan2(sum_norm.sqrt());
            (tau, dtheta > T::zero())
        }
    };
    let class = if future { CausalClass::TimelikeFuture } else { CausalClass::TimelikePast };
    Ok((tau, class))
}

/// Time separation function: `τ(p, q)` if `p ≪ q`, else `0`.
pub fn ordered_tau<T: Scalar>(param: &CurvatureParam<T>, p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<T> {
    let (tau, class) = tau_model(param, p, q)?;
    Ok(if class == CausalClass::TimelikeFuture { tau } else { T::zero() })
}

/// Point at proper time `sigma` along the geodesic from `p` with unit
/// timelike tangent `u` (`sigma` may be negative).
pub fn exp_point<T: Scalar>(param: &CurvatureParam<T>, p: &ModelPoint<T>, u: &Vec3<T>, sigma: T) -> ModelPoint<T> {
    let s = param.scale;
    let coords = match param.kind() {
        ModelKind::Flat => add3(&p.coords, &scale3(sigma, u)),
        ModelKind::DeSitter => lin3((sigma / s).cosh(), &p.coords, s * (sigma / s).sinh(), u),
        ModelKind::AntiDeSitter => lin3((sigma / s).cos(), &p.coords, s * (sigma / s).sin(), u),
    };
    ModelPoint::new(coords)
}

/// Unit tangent at `p` of the geodesic from `p` to the timelike related
/// point `q`; past-directed when `q` lies in the past of `p`.
pub fn initial_tangent<T: Scalar>(param: &CurvatureParam<T>, p: &ModelPoint<T>, q: &ModelPoint<T>) -> Result<Vec3<T>> {
    let (tau, class) = tau_model(param, p, q)?;
    if !class.is_timelike() {
        return Err(Error::Causality(format!("pair is {class:?}, not timelike")));
    }
    let s = param.scale;
    Ok(match param.kind() {
        ModelKind::Flat => scale3(T::one() / tau, &sub3(&q.coords, &p.coords)),
        ModelKind::DeSitter => {
            let c = (tau / s).cosh();
            let k = T::one() / (s * (tau / s).sinh());
            lin3(k, &q.coords, -k * c, &p.coords)
        }
        ModelKind::AntiDeSitter => {
            let c = (tau / s).cos();
            let k = T::one() / (s * (tau / s).sin());
            lin3(k, &q.coords, -k * c, &p.coords)
        }
    })
}

/// Point at proper time `u` along the timelike geodesic from `p` to `q`.
pub fn geodesic_interpolate<T: Scalar>(
    param: &CurvatureParam<T>,
    p: &ModelPoint<T>,
    q: &ModelPoint<T>,
    u: T,
) -> Result<ModelPoint<T>> {
    let (tau, class) = tau_model(param, p, q)?;
    if class != CausalClass::TimelikeFuture {
        return Err(Error::Causality(format!("geodesic needs p ≪ q, pair is {class:?}")));
    }
    let slack = T::lit(REVERSE_SLACK) * tau;
    if !(u >= -slack && u <= tau + slack) {
        return Err(Error::Range { value: u.as_f64(), lo: 0.0, hi: tau.as_f64() });
    }
    if u <= T::zero() {
        return Ok(*p);
    }
    if u >= tau {
        return Ok(*q);
    }
    let s = param.scale;
    let coords = match param.kind() {
        ModelKind::Flat => lin3(T::one() - u / tau, &p.coords, u / tau, &q.coords),
        ModelKind::DeSitter => {
            let den = (tau / s).sinh();
            lin3(((tau - u) / s).sinh() / den, &p.coords, (u / s).sinh() / den, &q.coords)
        }
        ModelKind::AntiDeSitter => {
            let den = (tau / s).sin();
            lin3(((tau - u) / s).sin() / den, &p.coords, (u / s).sin() / den, &q.coords)
        }
    };
    Ok(ModelPoint::new(coords))
}

/// Side lengths of a timelike triangle `x ≤ y ≤ z`:
/// `a = τ(x,y)`, `b = τ(y,z)`, `c = τ(x,z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleSides<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Scalar> TriangleSides<T> {
    /// Validates nonnegativity and the reverse triangle inequality.
    pub fn new(a: T, b: T, c: T) -> Result<Self> {
        let sides = Self { a, b, c };
        sides.validate()?;
        Ok(sides)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { a, b, c } = *self;
        let bad = || Error::InvalidTimelikeTriangle { a: a.as_f64(), b: b.as_f64(), c: c.as_f64() };
        if !(a >= T::zero() && b >= T::zero() && c >= T::zero()) || !c.is_finite() {
            return Err(bad());
        }
        if c - (a + b) < -T::lit(REVERSE_SLACK) * c {
            return Err(bad());
        }
        Ok(())
    }

    /// `c - a - b`, clamped at zero inside the slack.
    pub fn excess(&self) -> T {
        (self.c - (self.a + self.b)).max(T::zero())
    }

    /// Sides multiplied by `lambda`; the excess is scaled separately so a
    /// collinear triple stays collinear.
    pub fn scaled(&self, lambda: T) -> Self {
        let (a, b) = (lambda * self.a, lambda * self.b);
        let e = lambda * (self.c - (self.a + self.b));
        Self { a, b, c: a + b + e }
    }

    fn check_size(&self, param: &CurvatureParam<T>) -> Result<()> {
        if param.kind() == ModelKind::AntiDeSitter && self.c >= param.diameter() {
            return Err(Error::SizeBound { value: self.c.as_f64(), diameter: param.diameter().as_f64() });
        }
        Ok(())
    }
}

/// A comparison triangle placed canonically in a model plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealizedTriangle<T> {
    pub param: CurvatureParam<T>,
    pub px: ModelPoint<T>,
    pub py: ModelPoint<T>,
    pub pz: ModelPoint<T>,
    pub sides: TriangleSides<T>,
}

impl<T: Scalar> RealizedTriangle<T> {
    pub fn vertex(&self, v: Vertex) -> ModelPoint<T> {
        match v {
            Vertex::X => self.px,
            Vertex::Y => self.py,
            Vertex::Z => self.pz,
        }
    }
}

/// Which side of the canonical time axis a placed vertex goes to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn flip(self) -> Self {
        match self {
            Side::Positive => Side::Negative,
            Side::Negative => Side::Positive,
        }
    }
}

/// Places a vertex `R` given its time separations to the origin `P` and to
/// the point `Q` at proper time `shared` up the canonical time axis.
///
/// `tau_p` and `tau_q` are magnitudes; whether `R` lies before, between or
/// after `P` and `Q` is implied by the values. `R` is put on the requested
/// side of the axis.
pub fn place_vertex<T: Scalar>(
    param: &CurvatureParam<T>,
    shared: T,
    tau_p: T,
    tau_q: T,
    side: Side,
) -> Result<ModelPoint<T>> {
    if !(shared > T::zero()) {
        return Err(Error::Domain("shared edge must have positive length".into()));
    }
    let s = param.scale;
    let sign = if side == Side::Positive { T::one() } else { -T::one() };
    let (mut coords, spatial_sq, unit) = match param.kind() {
        ModelKind::Flat => {
            let t = (tau_p * tau_p - tau_q * tau_q + shared * shared) / (T::two() * shared);
            let x2 = (t - tau_p) * (t + tau_p);
            ([t, T::zero(), T::zero()], x2, shared.max(tau_p).max(tau_q))
        }
        ModelKind::DeSitter => {
            let r1 = s * (tau_p / s).cosh();
            let r0 = ((shared / s).cosh() * r1 - s * (tau_q / s).cosh()) / (shared / s).sinh();
            let sh = s * (tau_p / s).sinh();
            ([r0, r1, T::zero()], (r0 - sh) * (r0 + sh), r1)
        }
        ModelKind::AntiDeSitter => {
            let r0 = s * (tau_p / s).cos();
            let r1 = (s * (tau_q / s).cos() - (shared / s).cos() * r0) / (shared / s).sin();
            let sn = s * (tau_p / s).sin();
            ([r0, r1, T::zero()], (r1 - sn) * (r1 + sn), s)
        }
    };
    let slack = T::lit(1e-10) * unit * unit;
    if !(spatial_sq >= -slack) {
        return Err(Error::Infeasible(format!(
            "no point at separations ({tau_p}, {tau_q}) from an edge of length {shared}"
        )));
    }
    coords[param.side_index()] = sign * spatial_sq.max(T::zero()).sqrt();
    Ok(ModelPoint::new(coords))
}

/// Comparison triangle with `x` at the origin, `y` on the future time axis
/// and `z` on the nonnegative spatial side.
pub fn realize_triangle<T: Scalar>(param: &CurvatureParam<T>, sides: &TriangleSides<T>) -> Result<RealizedTriangle<T>> {
    sides.validate()?;
    sides.check_size(param)?;
    let origin = param.origin();
    let axis = param.time_axis();
    let py = exp_point(param, &origin, &axis, sides.a);
    let pz = if sides.a > T::zero() {
        place_vertex(param, sides.a, sides.c, sides.b, Side::Positive)?
    } else {
        exp_point(param, &origin, &axis, sides.c)
    };
    Ok(RealizedTriangle { param: *param, px: origin, py, pz, sides: *sides })
}

/// Vertex of a triangle `x ≤ y ≤ z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    X,
    Y,
    Z,
}

/// `cosh ω - 1` for the comparison angle `ω` at `vertex`.
///
/// Every law-of-cosines expression carries the factor `c - a - b`; it is
/// pulled out explicitly so collinear triples give exactly zero.
fn angle_cosh_minus_one<T: Scalar>(param: &CurvatureParam<T>, sides: &TriangleSides<T>, vertex: Vertex) -> Result<T> {
    sides.validate()?;
    sides.check_size(param)?;
    let TriangleSides { a, b, c } = *sides;
    let (p, q) = match vertex {
        Vertex::X => (a, c),
        Vertex::Y => (a, b),
        Vertex::Z => (b, c),
    };
    if !(p > T::zero() && q > T::zero()) {
        return Err(Error::DegenerateAngle);
    }
    let e = sides.excess();
    // Companion factor: c - a + b at x, c + a + b at y, c + a - b at z.
    let f = match vertex {
        Vertex::X => c - a + b,
        Vertex::Y => c + a + b,
        Vertex::Z => c + a - b,
    };
    let two = T::two();
    let s = param.scale;
    let delta = match param.kind() {
        ModelKind::Flat => e * f / (two * p * q),
        ModelKind::DeSitter => {
            two * (f / (two * s)).sinh() * (e / (two * s)).sinh() / ((p / s).sinh() * (q / s).sinh())
        }
        ModelKind::AntiDeSitter => {
            two * (f / (two * s)).sin() * (e / (two * s)).sin() / ((p / s).sin() * (q / s).sin())
        }
    };
    Ok(delta.max(T::zero()))
}

/// Hyperbolic comparison angle at `vertex` of the triangle with the given
/// sides in the plane of curvature `K`.
pub fn comparison_angle<T: Scalar>(param: &CurvatureParam<T>, sides: &TriangleSides<T>, vertex: Vertex) -> Result<T> {
    angle_cosh_minus_one(param, sides, vertex).map(acosh1p)
}

/// Signed comparison angle: negative at the most past and most future
/// vertex, positive at the middle one.
pub fn signed_comparison_angle<T: Scalar>(
    param: &CurvatureParam<T>,
    sides: &TriangleSides<T>,
    vertex: Vertex,
) -> Result<T> {
    let omega = comparison_angle(param, sides, vertex)?;
    Ok(match vertex {
        Vertex::Y => omega,
        Vertex::X | Vertex::Z => -omega,
    })
}

/// Reflection of `r` across the geodesic through `g1` and `g2`.
pub fn reflect_across_geodesic<T: Scalar>(
    param: &CurvatureParam<T>,
    g1: &ModelPoint<T>,
    g2: &ModelPoint<T>,
    r: &ModelPoint<T>,
) -> Result<ModelPoint<T>> {
    for p in [g1, g2, r] {
        param.check_point(p)?;
    }
    if g1 == g2 {
        return Err(Error::DegenerateGeodesic("coincident points".into()));
    }
    let (normal, base) = match param.kind() {
        ModelKind::Flat => {
            let d = sub3(&g2.coords, &g1.coords);
            ([d[1], d[0], T::zero()], g1.coords)
        }
        ModelKind::DeSitter => {
            let n = cross3(&g1.coords, &g2.coords);
            ([n[0], -n[1], -n[2]], [T::zero(); 3])
        }
        ModelKind::AntiDeSitter => {
            let n = cross3(&g1.coords, &g2.coords);
            ([n[0], n[1], -n[2]], [T::zero(); 3])
        }
    };
    let nn = param.inner(&normal, &normal);
    let scale = normal.iter().fold(T::zero(), |m, c| m.max(c.abs()));
    if !(nn.abs() > T::lit(1e-14) * scale * scale) {
        return Err(Error::DegenerateGeodesic("null or degenerate geodesic".into()));
    }
    let rel = sub3(&r.coords, &base);
    let k = T::two() * param.inner(&rel, &normal) / nn;
    Ok(ModelPoint::new(sub3(&r.coords, &scale3(k, &normal))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn param_invariants() {
        let p = CurvatureParam::new(-4.0).unwrap();
        assert!(close(p.scale(), 0.5, 1e-15));
        assert!(close(p.diameter(), std::f64::consts::PI / 2.0, 1e-15));
        assert!(close(p.scale() * p.scale() * p.k().abs(), 1.0, 1e-15));
        let q = CurvatureParam::new(0.25f64).unwrap();
        assert!(q.diameter().is_infinite());
        assert!(CurvatureParam::<f64>::flat().scale().is_infinite());
        assert!(CurvatureParam::new(f64::NAN).is_err());
    }

    #[test]
    fn flat_tau_examples() {
        let k0 = CurvatureParam::<f64>::flat();
        let o = ModelPoint::flat(0.0, 0.0);
        let (t, c) = tau_model(&k0, &o, &ModelPoint::flat(3.0, 0.0)).unwrap();
        assert_eq!((t, c), (3.0, CausalClass::TimelikeFuture));
        let (t, c) = tau_model(&k0, &o, &ModelPoint::flat(1.0, 2.0)).unwrap();
        assert_eq!((t, c), (0.0, CausalClass::Spacelike));
        let (t, c) = tau_model(&k0, &ModelPoint::flat(3.0, 0.0), &o).unwrap();
        assert_eq!((t, c), (3.0, CausalClass::TimelikePast));
        assert_eq!(ordered_tau(&k0, &ModelPoint::flat(3.0, 0.0), &o).unwrap(), 0.0);
    }

    #[test]
    fn de_sitter_tau_along_embedded_geodesic() {
        let k1 = CurvatureParam::new(1.0).unwrap();
        let p = ModelPoint::new([0.0, 1.0, 0.0]);
        let q = ModelPoint::new([2f64.sinh(), 2f64.cosh(), 0.0]);
        let (t, c) = tau_model(&k1, &p, &q).unwrap();
        assert!(close(t, 2.0, 1e-14));
        assert_eq!(c, CausalClass::TimelikeFuture);
    }

    #[test]
    fn anti_de_sitter_tau_and_patch() {
        let km = CurvatureParam::new(-1.0).unwrap();
        let p = km.point_at(0.0, 0.0);
        let q = km.point_at(1.2, 0.0);
        let (t, c) = tau_model(&km, &p, &q).unwrap();
        assert!(close(t, 1.2, 1e-14));
        assert_eq!(c, CausalClass::TimelikeFuture);
        // beyond the conjugate point no geodesic exists
        let far = km.point_at(std::f64::consts::PI, 0.5);
        assert!(matches!(tau_model(&km, &p, &far), Err(Error::SizeBound { .. })));
        // spatially separated points are spacelike
        let (_, c) = tau_model(&km, &p, &km.point_at(0.1, 0.5)).unwrap();
        assert_eq!(c, CausalClass::Spacelike);
    }

    #[test]
    fn off_quadric_points_are_rejected() {
        let k1 = CurvatureParam::new(1.0).unwrap();
        let bad = ModelPoint::new([0.0, 1.1, 0.0]);
        assert!(matches!(tau_model(&k1, &k1.origin(), &bad), Err(Error::InvalidPoint { .. })));
    }

    #[test]
    fn geodesic_interpolation_examples() {
        let k0 = CurvatureParam::<f64>::flat();
        let m = geodesic_interpolate(&k0, &ModelPoint::flat(0.0, 0.0), &ModelPoint::flat(2.0, 0.0), 1.0).unwrap();
        assert_eq!(m, ModelPoint::flat(1.0, 0.0));

        let k1 = CurvatureParam::new(1.0).unwrap();
        let p = ModelPoint::new([0.0, 1.0, 0.0]);
        let q = ModelPoint::new([2f64.sinh(), 2f64.cosh(), 0.0]);
        let m = geodesic_interpolate(&k1, &p, &q, 1.0).unwrap();
        let want = [1f64.sinh(), 1f64.cosh(), 0.0];
        for (got, want) in m.coords.iter().zip(want) {
            assert!(close(*got, want, 1e-14));
        }
        assert_eq!(geodesic_interpolate(&k1, &p, &q, 0.0).unwrap(), p);
        assert!(matches!(geodesic_interpolate(&k1, &p, &q, 2.5), Err(Error::Range { .. })));
        assert!(matches!(geodesic_interpolate(&k1, &q, &p, 1.0), Err(Error::Causality(_))));
    }

    #[test]
    fn realize_examples() {
        let k0 = CurvatureParam::<f64>::flat();
        let t = realize_triangle(&k0, &TriangleSides::new(1.0, 1.0, 2.0).unwrap()).unwrap();
        assert_eq!(t.px, ModelPoint::flat(0.0, 0.0));
        assert_eq!(t.py, ModelPoint::flat(1.0, 0.0));
        assert!(close(t.pz.coords[0], 2.0, 1e-15) && t.pz.coords[1].abs() < 1e-12);

        let t = realize_triangle(&k0, &TriangleSides::new(1.0, 1.0, 3.0).unwrap()).unwrap();
        assert!(close(t.pz.coords[0], 4.5, 1e-15));
        assert!(close(t.pz.coords[1], 11.25f64.sqrt(), 1e-15));
        assert!((t.pz.coords[1] - 3.35410).abs() < 1e-5);

        assert!(matches!(TriangleSides::new(1.0, 1.0, 1.5), Err(Error::InvalidTimelikeTriangle { .. })));
    }

    #[test]
    fn size_bound_rejected_for_negative_curvature() {
        let km = CurvatureParam::new(-1.0).unwrap();
        let sides = TriangleSides::new(1.0, 2.0, 3.2).unwrap();
        assert!(matches!(realize_triangle(&km, &sides), Err(Error::SizeBound { .. })));
    }

    #[test]
    fn flat_angle_examples() {
        let k0 = CurvatureParam::<f64>::flat();
        let s = TriangleSides::new(1.0, 1.0, 3.0).unwrap();
        let wy = comparison_angle(&k0, &s, Vertex::Y).unwrap();
        let wx = comparison_angle(&k0, &s, Vertex::X).unwrap();
        assert!(close(wy, 3.5f64.acosh(), 1e-14));
        assert!((wy - 1.924847).abs() < 1e-6);
        assert!(close(wx, 1.5f64.acosh(), 1e-14));
        assert!((wx - 0.962424).abs() < 1e-6);
        assert!(signed_comparison_angle(&k0, &s, Vertex::Y).unwrap() > 0.0);
        assert!(close(signed_comparison_angle(&k0, &s, Vertex::X).unwrap(), -wx, 1e-15));
        let wz = comparison_angle(&k0, &s, Vertex::Z).unwrap();
        assert!(close(signed_comparison_angle(&k0, &s, Vertex::Z).unwrap(), -wz, 1e-15));
    }

    #[test]
    fn collinear_angles_vanish_exactly() {
        for k in [-1.0, 0.0, 0.5] {
            let p = CurvatureParam::new(k).unwrap();
            let s = TriangleSides::new(0.7, 1.1, 0.7 + 1.1).unwrap();
            for v in [Vertex::X, Vertex::Y, Vertex::Z] {
                assert_eq!(comparison_angle(&p, &s, v).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn zero_adjacent_side_is_degenerate() {
        let k0 = CurvatureParam::<f64>::flat();
        let s = TriangleSides::new(0.0, 1.0, 1.0).unwrap();
        assert!(matches!(comparison_angle(&k0, &s, Vertex::Y), Err(Error::DegenerateAngle)));
        assert_eq!(comparison_angle(&k0, &s, Vertex::Z).unwrap(), 0.0);
    }

    #[test]
    fn reflection_examples() {
        let k0 = CurvatureParam::<f64>::flat();
        let r = reflect_across_geodesic(
            &k0,
            &ModelPoint::flat(0.0, 0.0),
            &ModelPoint::flat(1.0, 0.0),
            &ModelPoint::flat(1.0, 2.0),
        )
        .unwrap();
        assert_eq!(r, ModelPoint::flat(1.0, -2.0));

        let k1 = CurvatureParam::new(1.0).unwrap();
        let g1 = ModelPoint::new([0.0, 1.0, 0.0]);
        let g2 = ModelPoint::new([1f64.sinh(), 1f64.cosh(), 0.0]);
        let r = k1.point_at(0.3, 0.4);
        let img = reflect_across_geodesic(&k1, &g1, &g2, &r).unwrap();
        for i in 0..2 {
            assert!(close(img.coords[i], r.coords[i], 1e-14));
        }
        assert!(close(img.coords[2], -r.coords[2], 1e-14));
        let back = reflect_across_geodesic(&k1, &g1, &g2, &img).unwrap();
        for i in 0..3 {
            assert!((back.coords[i] - r.coords[i]).abs() < 1e-12);
        }
        assert!(matches!(reflect_across_geodesic(&k1, &g1, &g1, &r), Err(Error::DegenerateGeodesic(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let k1 = CurvatureParam::<f32>::new(1.0).unwrap();
        let s = TriangleSides::new(0.5f32, 0.5, 1.2).unwrap();
        let t = realize_triangle(&k1, &s).unwrap();
        let (c, _) = tau_model(&k1, &t.px, &t.pz).unwrap();
        assert!((c - 1.2).abs() < 1e-4);
    }
}
