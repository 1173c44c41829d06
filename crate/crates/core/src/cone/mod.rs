//! Minkowski cones over metric spaces.
//!
//! A point of `Con(Y)` is a pair `(r, y)` with `r ≥ 0`; all pairs with
//! `r = 0` are the apex. The cone carries the metric
//! `d² = r1² + r2² − 2 r1 r2 cos(min(π, d_Y))` and, on causal pairs, the
//! time separation `τ² = r1² + r2² − 2 r1 r2 cosh(d_Y)`. A pair is causal
//! when that expression is nonnegative and the radius does not decrease.

mod base_check;
mod bases;

pub use base_check::{base_curvature_minus1_check, BaseCheckReport, BaseWitness};
pub use bases::{random_tree, BaseModel, BaseSample, TransferFit, TransferRow};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorspace::FiniteLorentzSpace;
use crate::scalar::Scalar;

/// Expressions this close below zero are treated as null separation.
pub const NULL_CLAMP: f64 = 1e-12;

/// A finite metric space given by its distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace<T> {
    n: usize,
    d: Vec<T>,
}

impl<T: Scalar> FiniteMetricSpace<T> {
    /// Validates symmetry, zero diagonal, nonnegativity and the triangle
    /// inequality within `1e-9`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidBase(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            d.extend(row);
        }
        let space = Self { n, d };
        space.validate(T::lit(1e-9))?;
        Ok(space)
    }

    pub(crate) fn from_fn(n: usize, f: impl Fn(usize, usize) -> T) -> Result<Self> {
        let mut d = vec![T::zero(); n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        let space = Self { n, d };
        space.validate(T::lit(1e-9))?;
        Ok(space)
    }

    pub fn single_point() -> Self {
        Self { n: 1, d: vec![T::zero()] }
    }

    pub fn validate(&self, tol: T) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            if self.d(i, i).abs() > tol {
                return Err(Error::InvalidBase(format!("d[{i}][{i}] = {} is not zero", self.d(i, i))));
            }
            for j in 0..n {
                let v = self.d(i, j);
                if !v.is_finite() || v < -tol {
                    return Err(Error::InvalidBase(format!("d[{i}][{j}] = {v} is not a nonnegative real")));
                }
                if (v - self.d(j, i)).abs() > tol {
                    return Err(Error::InvalidBase(format!("d[{i}][{j}] = {v} but d[{j}][{i}] = {}", self.d(j, i))));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.d(i, k) > self.d(i, j) + self.d(j, k) + tol {
                        return Err(Error::InvalidBase(format!("triangle inequality fails at ({i}, {j}, {k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> T {
        self.d[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.d.chunks(self.n.max(1)).take(self.n).map(<[T]>::to_vec).collect()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound = "T: Scalar")]
struct BaseFile<T> {
    n: usize,
    #[serde(rename = "dY")]
    d_y: Vec<Vec<T>>,
}

/// Base spaces share the JSON matrix layout of space files:
/// `{"n": 2, "dY": [[0, 1], [1, 0]]}`.
pub fn base_to_json<T: Scalar>(base: &FiniteMetricSpace<T>) -> String {
    let mut out = serde_json::to_string(&BaseFile { n: base.len(), d_y: base.rows() }).expect("base serializes");
    out.push('\n');
    out
}

pub fn parse_base<T: Scalar>(text: &str) -> Result<FiniteMetricSpace<T>> {
    let file: BaseFile<T> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.d_y.len() != file.n {
        return Err(Error::Structural(format!("n = {} but dY has {} rows", file.n, file.d_y.len())));
    }
    FiniteMetricSpace::from_rows(file.d_y)
}

pub fn load_base<T: Scalar>(path: impl AsRef<Path>) -> Result<FiniteMetricSpace<T>> {
    parse_base(&std::fs::read_to_string(path)?)
}

/// A cone point `(r, y)`; `base_index` is ignored at the apex.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConePoint<T> {
    pub r: T,
    pub base_index: usize,
}

impl<T: Scalar> ConePoint<T> {
    pub fn new(r: T, base_index: usize) -> Result<Self> {
        if !(r >= T::zero()) || !r.is_finite() {
            return Err(Error::Domain(format!("cone radius must be a nonnegative real, got {r}")));
        }
        Ok(Self { r, base_index })
    }

    pub fn apex() -> Self {
        Self { r: T::zero(), base_index: 0 }
    }

    pub fn is_apex(&self) -> bool {
        self.r == T::zero()
    }
}

impl<T: Scalar> PartialEq for ConePoint<T> {
    fn eq(&self, other: &Self) -> bool {
        self.r == other.r && (self.is_apex() || self.base_index == other.base_index)
    }
}

fn check_radii<T: Scalar>(r1: T, r2: T, dy: T) -> Result<()> {
    if !(r1 >= T::zero() && r2 >= T::zero()) {
        return Err(Error::Domain(format!("negative cone radius ({r1}, {r2})")));
    }
    if !(dy >= T::zero()) {
        return Err(Error::Domain(format!("base distance must be nonnegative, got {dy}")));
    }
    Ok(())
}

/// Cone metric between two points whose base points are `dy` apart.
pub fn cone_metric<T: Scalar>(x1: &ConePoint<T>, x2: &ConePoint<T>, dy: T) -> Result<T> {
    check_radii(x1.r, x2.r, dy)?;
    let (r1, r2) = (x1.r, x2.r);
    let half = (dy.min(T::PI()) / T::two()).sin();
    let sq = (r1 - r2) * (r1 - r2) + T::lit(4.0) * r1 * r2 * half * half;
    Ok(sq.max(T::zero()).sqrt())
}

/// Time separation and causal character of an ordered pair of cone points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeTau<T> {
    pub tau: T,
    pub causal: bool,
    pub timelike: bool,
}

/// `r1² + r2² − 2 r1 r2 cosh d`, written to avoid cancellation near the
/// light cone.
fn tau_squared<T: Scalar>(r1: T, r2: T, dy: T) -> T {
    let s = (dy / T::two()).sinh();
    (r2 - r1) * (r2 - r1) - T::lit(4.0) * r1 * r2 * s * s
}

pub fn cone_tau<T: Scalar>(x1: &ConePoint<T>, x2: &ConePoint<T>, dy: T) -> Result<ConeTau<T>> {
    check_radii(x1.r, x2.r, dy)?;
    let (r1, r2) = (x1.r, x2.r);
    let none = ConeTau { tau: T::zero(), causal: false, timelike: false };
    if r1 == T::zero() {
        return Ok(ConeTau { tau: r2, causal: true, timelike: r2 > T::zero() });
    }
    if x1 == x2 {
        return Ok(ConeTau { tau: T::zero(), causal: true, timelike: false });
    }
    if r1 > r2 {
        return Ok(none);
    }
    let sq = tau_squared(r1, r2, dy);
    if sq >= T::zero() {
        let tau = sq.sqrt();
        Ok(ConeTau { tau, causal: true, timelike: tau > T::zero() })
    } else if sq >= -T::lit(NULL_CLAMP) {
        Ok(ConeTau { tau: T::zero(), causal: true, timelike: false })
    } else {
        Ok(none)
    }
}

/// Point layout of [`build_cone_space`]: the apex first when included,
/// then base-major, `radii.len()` points per base point.
pub fn cone_points<T: Scalar>(base_len: usize, radii: &[T], include_apex: bool) -> Vec<ConePoint<T>> {
    let mut out = Vec::with_capacity(base_len * radii.len() + usize::from(include_apex));
    if include_apex {
        out.push(ConePoint::apex());
    }
    for y in 0..base_len {
        out.extend(radii.iter().map(|&r| ConePoint { r, base_index: y }));
    }
    out
}

/// Assembles the finite Lorentzian space of cone points over `base`.
pub fn build_cone_space<T: Scalar>(
    base: &FiniteMetricSpace<T>,
    radii: &[T],
    include_apex: bool,
) -> Result<FiniteLorentzSpace<T>> {
    if let Some(r) = radii.iter().find(|r| !(**r > T::zero()) || !r.is_finite()) {
        return Err(Error::Domain(format!("cone radii must be positive, got {r}")));
    }
    base.validate(T::lit(1e-9))?;
    let points = cone_points(base.len(), radii, include_apex);
    let n = points.len();
    let mut d = vec![T::zero(); n * n];
    let mut tau = vec![T::zero(); n * n];
    let mut causal = vec![false; n * n];
    for (i, p) in points.iter().enumerate() {
        for (j, q) in points.iter().enumerate() {
            let dy = base.d(p.base_index, q.base_index);
            d[i * n + j] = cone_metric(p, q, dy)?;
            let t = cone_tau(p, q, dy)?;
            tau[i * n + j] = t.tau;
            causal[i * n + j] = t.causal || i == j;
        }
    }
    FiniteLorentzSpace::from_flat(n, d, tau, causal)
}

/// First-order data for transferring a base midpoint to a cone midpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferQuantities<T> {
    pub mu: T,
    pub r_m: T,
    pub eps_coefficient: T,
}

/// For a timelike pair `(r2, y2) ≪ (r3, y3)` with `d(y2, y3) = d23`, the
/// point `(r_m, midpoint(y2, y3))` is a `μ`-midpoint, and moving the base
/// midpoint by `ε` moves its defects by `eps_coefficient · ε` to first order.
pub fn transfer_quantities<T: Scalar>(r2: T, r3: T, d23: T) -> Result<TransferQuantities<T>> {
    check_radii(r2, r3, d23)?;
    let sq = tau_squared(r2, r3, d23);
    if !(r2 > T::zero() && r3 > r2 && sq > T::zero()) {
        return Err(Error::Causality(format!("({r2}, ·) and ({r3}, ·) at base distance {d23} are not timelike")));
    }
    let sum = r2 + r3;
    Ok(TransferQuantities {
        mu: r2 / sum,
        r_m: T::two() * r2 * r3 * (d23 / T::two()).cosh() / sum,
        eps_coefficient: r2 * r3 * d23.sinh() / sq.sqrt(),
    })
}

/// Polar isometry of the cone over a line onto the future cone of the
/// origin in two-dimensional Minkowski space.
pub fn polar_map<T: Scalar>(r: T, y: T) -> (T, T) {
    (r * y.cosh(), r * y.sinh())
}

/// Circular polar image used to check the cone metric.
pub fn circular_map<T: Scalar>(r: T, y: T) -> (T, T) {
    (r * y.cos(), r * y.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(r: f64, y: usize) -> ConePoint<f64> {
        ConePoint::new(r, y).unwrap()
    }

    #[test]
    fn metric_examples() {
        assert!((cone_metric(&pt(1.0, 0), &pt(3.0, 0), 0.0).unwrap() - 2.0).abs() < 1e-15);
        let d = cone_metric(&pt(1.0, 0), &pt(1.0, 1), std::f64::consts::FRAC_PI_2).unwrap();
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
        assert!((cone_metric(&pt(1.0, 0), &pt(2.0, 1), 10.0).unwrap() - 3.0).abs() < 1e-15);
        assert!(ConePoint::new(-1.0, 0).is_err());
    }

    #[test]
    fn tau_examples() {
        let t = cone_tau(&ConePoint::apex(), &pt(2.5, 3), 7.0).unwrap();
        assert_eq!((t.tau, t.causal, t.timelike), (2.5, true, true));
        let t = cone_tau(&pt(1.0, 0), &pt(2.0, 1), 0.5).unwrap();
        assert!((t.tau - 0.699640).abs() < 5e-7 && t.timelike);
        assert!((t.tau - (5.0 - 4.0 * 0.5f64.cosh()).sqrt()).abs() < 1e-15);
        let back = cone_tau(&pt(2.0, 1), &pt(1.0, 0), 0.5).unwrap();
        assert!(!back.causal && back.tau == 0.0);
        let t = cone_tau(&pt(1.0, 0), &pt(1.0, 1), 0.5).unwrap();
        assert!(!t.causal && t.tau == 0.0);
        let t = cone_tau(&pt(1.5, 2), &pt(1.5, 2), 0.0).unwrap();
        assert!(t.causal && !t.timelike);
        assert_eq!(ConePoint::<f64>::apex(), ConePoint { r: 0.0, base_index: 9 });
    }

    #[test]
    fn single_point_base_is_a_ray() {
        let s = build_cone_space(&FiniteMetricSpace::single_point(), &[1.0, 2.0, 3.0], false).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if j > i { (j - i) as f64 } else { 0.0 };
                assert!((s.tau(i, j) - want).abs() < 1e-15);
                assert_eq!(s.causal(i, j), j >= i);
            }
        }
    }

    #[test]
    fn apex_precedes_everything() {
        let base = FiniteMetricSpace::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap();
        let s = build_cone_space(&base, &[0.5, 1.5], true).unwrap();
        let pts = cone_points(2, &[0.5, 1.5], true);
        for (j, p) in pts.iter().enumerate().skip(1) {
            assert!(s.causal(0, j));
            assert_eq!(s.tau(0, j), p.r);
            assert!(!s.causal(j, 0));
        }
    }

    #[test]
    fn transfer_example() {
        let q = transfer_quantities(1.0f64, 2.0, 0.5).unwrap();
        assert!((q.mu - 1.0 / 3.0).abs() < 1e-15);
        assert!((q.r_m - 1.375217).abs() < 5e-7);
        assert!((q.eps_coefficient - 1.4896098004615834).abs() < 1e-12);
        assert!((q.eps_coefficient - 1.489608).abs() < 5e-6);
        let mid = pt(q.r_m, 1);
        let t2m = cone_tau(&pt(1.0, 0), &mid, 0.25).unwrap().tau;
        let tm3 = cone_tau(&mid, &pt(2.0, 2), 0.25).unwrap().tau;
        assert!((t2m - 0.233213).abs() < 5e-7 && (tm3 - 0.466427).abs() < 5e-7);
        let harmonic = transfer_quantities(1.0f64, 2.0, 0.0).unwrap();
        assert!((harmonic.r_m - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(transfer_quantities(1.0, 1.0, 0.5), Err(Error::Causality(_))));
    }

    #[test]
    fn polar_examples() {
        assert_eq!(polar_map(1.0, 0.0), (1.0, 0.0));
        let (t, x) = polar_map(2.0f64, 0.5);
        assert!((t - 2.255252).abs() < 5e-7 && (x - 1.042191).abs() < 5e-7);
        let (t1, x1) = polar_map(1.0f64, 0.0);
        let flat = ((t - t1).powi(2) - (x - x1).powi(2)).sqrt();
        assert!((flat - 0.699640).abs() < 5e-7);
    }

    #[test]
    fn base_validation() {
        assert!(FiniteMetricSpace::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let bad = vec![vec![0.0, 1.0, 3.0], vec![1.0, 0.0, 1.0], vec![3.0, 1.0, 0.0]];
        assert!(matches!(FiniteMetricSpace::from_rows(bad), Err(Error::InvalidBase(_))));
        let b = FiniteMetricSpace::from_rows(vec![vec![0.0, 0.7], vec![0.7, 0.0]]).unwrap();
        assert_eq!(parse_base::<f64>(&base_to_json(&b)).unwrap(), b);
        assert!(parse_base::<f64>(r#"{"n": 1, "dY": [[0]], "extra": 0}"#).is_err());
    }
}
