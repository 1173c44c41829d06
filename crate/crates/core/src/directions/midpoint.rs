//! The constructive direction midpoint and the decay of successive
//! midpoints as the accuracy is refined.

use serde::{Deserialize, Serialize};

use super::angle::angle_at_base;
use super::{angle_estimate, same_base, smooth_angle, DirectionSample, GridSpec, SAME_DIRECTION};
use crate::error::{Error, Result};
use crate::lorspace::{ambient_geodesic, ambient_initial_tangent, ambient_tau};
use crate::model2d::{CausalClass, CurvatureParam};
use crate::scalar::{Scalar, Vec3};

const MAX_BISECTIONS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DirectionMidpoint<T> {
    pub m: DirectionSample<T>,
    pub omega: f64,
    /// Estimated angles `∠(d1, m)` and `∠(m, d2)`.
    pub angles: [f64; 2],
    pub t: f64,
    pub s: f64,
    /// Final gap `|∠̃(a, b) − ∠̃(b, c)|` of the bisection.
    pub gap: f64,
    pub iterations: usize,
}

fn estimate_or_fail<T: Scalar>(d1: &DirectionSample<T>, d2: &DirectionSample<T>, grid: &GridSpec<T>) -> Result<f64> {
    angle_estimate(d1, d2, grid)?
        .estimate
        .ok_or_else(|| Error::Numerical("angle estimate has no admissible grid pair".into()))
}

/// Picks `t, s` with `|θ(t, s) − ω| < ε/4`, bisects for the point `b` on
/// the realizer between `γ1(t)` and `γ2(s)` whose two comparison angles at
/// `p` agree within `ε/4`, and returns the direction of `p → b`.
pub fn direction_midpoint<T: Scalar>(
    d1: &DirectionSample<T>,
    d2: &DirectionSample<T>,
    eps: T,
) -> Result<DirectionMidpoint<T>> {
    same_base(d1, d2)?;
    if !(eps > T::zero()) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    let grid = GridSpec::default();
    let est = angle_estimate(d1, d2, &grid)?;
    let omega = est.estimate.ok_or_else(|| Error::Numerical("angle estimate has no admissible grid pair".into()))?;
    if omega <= SAME_DIRECTION {
        return Ok(DirectionMidpoint { m: *d1, omega, angles: [0.0, 0.0], t: 0.0, s: 0.0, gap: 0.0, iterations: 0 });
    }
    let quarter = eps.as_f64() / 4.0;
    let (i, j) = (0..grid.t.len())
        .flat_map(|i| (0..grid.s.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| est.theta[i][j].is_some_and(|v| (v - omega).abs() < quarter))
        .min_by_key(|&(i, j)| (i.max(j), i + j, i))
        .ok_or_else(|| Error::Numerical(format!("no grid pair within {quarter} of the angle {omega}")))?;
    let (t, s) = (grid.t[i], grid.s[j]);
    let spec = d1.ambient;
    let k0 = CurvatureParam::flat();
    let a = d1.point(t)?;
    let c = d2.point(s)?;
    let (tac, class) = ambient_tau(&spec, &a, &c)?;
    let (start, end) = match class {
        CausalClass::TimelikeFuture => (a, c),
        CausalClass::TimelikePast => (c, a),
        _ => return Err(Error::Numerical("selected grid pair is not timelike related".into())),
    };
    let p = d1.p;
    let angle = |x: &Vec3<T>, y: &Vec3<T>| -> Result<f64> {
        let tpx = ambient_tau(&spec, &p, x)?.0;
        let tpy = ambient_tau(&spec, &p, y)?.0;
        if ambient_tau(&spec, x, y)?.0 == T::zero() {
            return Ok(0.0);
        }
        angle_at_base(&spec, &k0, x, tpx, y, tpy)?
            .map(|v| v.as_f64())
            .ok_or_else(|| Error::Numerical("bisection left the admissible set".into()))
    };
    // Signed gap ∠̃(a, b) − ∠̃(b, c): negative at b = a, positive at b = c.
    let gap_at = |u: T| -> Result<(f64, Vec3<T>)> {
        let b = ambient_geodesic(&spec, &start, &end, u)?;
        Ok((angle(&a, &b)? - angle(&b, &c)?, b))
    };
    let (mut lo, mut hi) = (T::zero(), tac);
    let (g_lo, _) = gap_at(lo)?;
    let (g_hi, _) = gap_at(hi)?;
    let rising = g_hi > g_lo;
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::Numerical(format!("bisection does not bracket: gaps {g_lo} and {g_hi}")));
    }
    let mut iterations = 0;
    let (mut gap, mut b) = gap_at((lo + hi) / T::two())?;
    while gap.abs() > quarter && iterations < MAX_BISECTIONS {
        let mid = (lo + hi) / T::two();
        if (gap < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
        (gap, b) = gap_at((lo + hi) / T::two())?;
    }
    if gap.abs() > quarter {
        return Err(Error::Numerical(format!("bisection stalled at gap {gap} after {iterations} steps")));
    }
    let m = DirectionSample::new(spec, p, ambient_initial_tangent(&spec, &p, &b)?)?;
    let angles = [estimate_or_fail(d1, &m, &grid)?, estimate_or_fail(&m, d2, &grid)?];
    Ok(DirectionMidpoint { m, omega, angles, t: t.as_f64(), s: s.as_f64(), gap, iterations })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub eps: Vec<f64>,
    /// `tail[k] = max_{l > k} ∠(m_k, m_l)`.
    pub tail: Vec<f64>,
    /// Smallest `C` with `∠(m_k, m_l) ≤ C·ε_min(k,l)` over all pairs.
    pub constant: f64,
    /// Fitted per-level ratio of `tail`.
    pub rate: Option<f64>,
    /// Distance of each midpoint from the exact bisector, `|∠(d1, m_k) − ω/2|`.
    pub bisector_error: Vec<f64>,
}

/// Midpoints for `ε_k = 2^-k`, `k = 1..=levels`, and their mutual angles.
pub fn midpoint_cauchy<T: Scalar>(
    d1: &DirectionSample<T>,
    d2: &DirectionSample<T>,
    levels: u32,
) -> Result<CauchyReport> {
    let eps: Vec<f64> = (1..=levels).map(|k| 2f64.powi(-(k as i32))).collect();
    let mids: Vec<DirectionMidpoint<T>> =
        eps.iter().map(|&e| direction_midpoint(d1, d2, T::lit(e))).collect::<Result<_>>()?;
    let n = mids.len();
    let omega = smooth_angle(d1, d2)?.as_f64();
    let mut tail = vec![0.0f64; n];
    let mut constant = 0.0f64;
    for k in 0..n {
        for l in (k + 1)..n {
            let a = smooth_angle(&mids[k].m, &mids[l].m)?.as_f64();
            tail[k] = tail[k].max(a);
            constant = constant.max(a / eps[k]);
        }
    }
    let bisector_error =
        mids.iter().map(|m| Ok((smooth_angle(d1, &m.m)?.as_f64() - omega / 2.0).abs())).collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> =
        tail.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(k, &v)| (k as f64, v.log2())).collect();
    let rate = (pts.len() >= 2).then(|| {
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        let (mx, my) = (sx / m, sy / m);
        let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
        2f64.powf(num / den)
    });
    Ok(CauchyReport { eps, tail, constant, rate, bisector_error })
}
