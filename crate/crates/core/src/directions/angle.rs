//! Comparison angles `θ(t, s)` between two geodesics from a common point and
//! their limit as `t, s → 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{same_base, DirectionSample};
use crate::curvcheck::BoundSide;
use crate::error::{Error, Result};
use crate::lorspace::{ambient_tau, AmbientSpec};
use crate::model2d::{comparison_angle, CausalClass, CurvatureParam, TriangleSides, Vertex};
use crate::scalar::{Scalar, Vec3};

/// Tolerance below which the tail supremum and the extrapolated limit are
/// considered to agree; ten times this triggers a warning.
const AGREEMENT: f64 = 1e-4;

/// Geometric parameter grids for the two curves, coarsest first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GridSpec<T> {
    pub t: Vec<T>,
    pub s: Vec<T>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(mut t: Vec<T>, mut s: Vec<T>) -> Result<Self> {
        if t.is_empty() || s.is_empty() || t.iter().chain(&s).any(|v| !(*v > T::zero()) || !v.is_finite()) {
            return Err(Error::Domain("grid values must be positive and finite".into()));
        }
        let desc = |a: &T, b: &T| b.as_f64().total_cmp(&a.as_f64());
        t.sort_by(desc);
        s.sort_by(desc);
        Ok(Self { t, s })
    }

    /// `{2^-k_min, …, 2^-k_max}·t0` on both axes.
    pub fn geometric(k_min: i32, k_max: i32, t0: T) -> Result<Self> {
        if k_max < k_min {
            return Err(Error::Domain(format!("empty exponent range {k_min}..={k_max}")));
        }
        let v: Vec<T> = (k_min..=k_max).map(|k| t0 * T::two().powi(-k)).collect();
        Self::new(v.clone(), v)
    }
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        Self::geometric(3, 14, T::one()).expect("default grid is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub k: f64,
    pub t: Vec<f64>,
    pub s: Vec<f64>,
    /// `theta[i][j]` for `(t[i], s[j])`; `None` outside the admissible set.
    pub theta: Vec<Vec<Option<f64>>>,
    /// Supremum over the finest quarter of both axes, widened by quarters
    /// when that block has no admissible pair.
    pub estimate: Option<f64>,
    pub extrapolated: Option<f64>,
    pub warning: Option<String>,
}

/// Comparison angle at `p` of the triangle `(p, x, y)`, given `τ(p, x)` and
/// `τ(p, y)`, when `x` and `y` are timelike related.
pub(crate) fn angle_at_base<T: Scalar>(
    spec: &AmbientSpec<T>,
    param: &CurvatureParam<T>,
    x: &Vec3<T>,
    tpx: T,
    y: &Vec3<T>,
    tpy: T,
) -> Result<Option<T>> {
    let (txy, class) = ambient_tau(spec, x, y)?;
    let sides = match class {
        CausalClass::TimelikeFuture => TriangleSides::new(tpx, txy, tpy),
        CausalClass::TimelikePast => TriangleSides::new(tpy, txy, tpx),
        _ => return Ok(None),
    };
    match sides.and_then(|s| comparison_angle(param, &s, Vertex::X)) {
        Ok(a) => Ok(Some(a)),
        Err(
            Error::SizeBound { .. }
            | Error::InvalidTimelikeTriangle { .. }
            | Error::DegenerateAngle
            | Error::Range { .. },
        ) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Tail extrapolation along the cell family `j − i = const` with the
/// finest admissible entry: a geometric remainder is fitted to the last
/// three consecutive values.
fn extrapolate(theta: &[Vec<Option<f64>>]) -> Option<f64> {
    let (nt, ns) = (theta.len(), theta.first().map_or(0, Vec::len));
    let mut best: Option<(usize, usize, Vec<f64>)> = None;
    for offset in -(nt as isize - 1)..(ns as isize) {
        let mut run: Vec<f64> = Vec::new();
        let mut last_i = 0;
        for (i, row) in theta.iter().enumerate() {
            let j = i as isize + offset;
            if j < 0 || j >= ns as isize {
                continue;
            }
            match row[j as usize] {
                Some(v) => {
                    run.push(v);
                    last_i = i;
                }
                None => run.clear(),
            }
        }
        if run.is_empty() {
            continue;
        }
        let key = (last_i, usize::MAX - offset.unsigned_abs());
        if best.as_ref().is_none_or(|b| (key.0, key.1) > (b.0, b.1)) {
            best = Some((key.0, key.1, run));
        }
    }
    let run = best?.2;
    let n = run.len();
    if n < 3 {
        return run.last().copied();
    }
    let (x0, x1, x2) = (run[n - 3], run[n - 2], run[n - 1]);
    let (d1, d2) = (x1 - x0, x2 - x1);
    if d1 == 0.0 || d2 == 0.0 {
        return Some(x2);
    }
    let r = d2 / d1;
    if r > 0.0 && r < 1.0 {
        Some(x2 + d2 * r / (1.0 - r))
    } else {
        Some(x2)
    }
}

/// Comparison angles of `(p, γ1(t), γ2(s))` in the plane of curvature `K`
/// over the grid.
pub fn angle_estimate_with<T: Scalar>(
    d1: &DirectionSample<T>,
    d2: &DirectionSample<T>,
    grid: &GridSpec<T>,
    param: &CurvatureParam<T>,
) -> Result<AngleGrid> {
    same_base(d1, d2)?;
    let a: Vec<Vec3<T>> = grid.t.iter().map(|&t| d1.point(t)).collect::<Result<_>>()?;
    let b: Vec<Vec3<T>> = grid.s.iter().map(|&s| d2.point(s)).collect::<Result<_>>()?;
    let theta: Vec<Vec<Option<f64>>> = (0..grid.t.len())
        .into_par_iter()
        .map(|i| {
            (0..grid.s.len())
                .map(|j| Ok(angle_at_base(&d1.ambient, param, &a[i], grid.t[i], &b[j], grid.s[j])?.map(|v| v.as_f64())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let (nt, ns) = (grid.t.len(), grid.s.len());
    let mut block = 1;
    let (mut estimate, mut widened) = (None, false);
    while estimate.is_none() && block <= 4 {
        let (qt, qs) = (nt - (nt * block).div_ceil(4), ns - (ns * block).div_ceil(4));
        estimate = theta[qt..]
            .iter()
            .flat_map(|row| row[qs..].iter().flatten().copied())
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        widened = block > 1;
        block += 1;
    }
    let extrapolated = extrapolate(&theta);
    let warning = match (estimate, extrapolated) {
        (Some(e), Some(x)) if (e - x).abs() > 10.0 * AGREEMENT => {
            Some(format!("tail supremum {e} and extrapolated limit {x} differ by more than {}", 10.0 * AGREEMENT))
        }
        (None, _) => Some("no admissible grid pair".into()),
        (Some(_), _) if widened => {
            Some(format!("tail block widened to the finest {} of the grid", (block - 1) as f64 / 4.0))
        }
        _ => None,
    };
    Ok(AngleGrid {
        k: param.k().as_f64(),
        t: grid.t.iter().map(|v| v.as_f64()).collect(),
        s: grid.s.iter().map(|v| v.as_f64()).collect(),
        theta,
        estimate,
        extrapolated,
        warning,
    })
}

/// [`angle_estimate_with`] at `K = 0`.
pub fn angle_estimate<T: Scalar>(
    d1: &DirectionSample<T>,
    d2: &DirectionSample<T>,
    grid: &GridSpec<T>,
) -> Result<AngleGrid> {
    angle_estimate_with(d1, d2, grid, &CurvatureParam::flat())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityVerdict {
    pub side: BoundSide,
    pub comparisons: usize,
    /// Largest step against the required direction.
    pub defect: f64,
    pub pass: bool,
}

/// Monotonicity of the signed angle `−θ(t, s)` along increasing `t` and `s`.
/// With [`BoundSide`]'s convention an upper bound makes the signed angle
/// nondecreasing (the unsigned angle shrinks as the triangle grows), and a
/// lower bound makes it nonincreasing.
pub fn theta_monotonicity<T: Scalar>(
    d1: &DirectionSample<T>,
    d2: &DirectionSample<T>,
    grid: &GridSpec<T>,
    side: BoundSide,
    tol: T,
) -> Result<MonotonicityVerdict> {
    let g = angle_estimate(d1, d2, grid)?;
    let (mut defect, mut comparisons) = (0.0f64, 0usize);
    let mut step = |coarse: Option<f64>, fine: Option<f64>| {
        if let (Some(c), Some(f)) = (coarse, fine) {
            comparisons += 1;
            let (signed_coarse, signed_fine) = (-c, -f);
            let d = match side {
                BoundSide::Upper => signed_fine - signed_coarse,
                BoundSide::Lower => signed_coarse - signed_fine,
            };
            defect = defect.max(d);
        }
    };
    for i in 0..g.t.len() {
        for j in 0..g.s.len() {
            if i + 1 < g.t.len() {
                step(g.theta[i][j], g.theta[i + 1][j]);
            }
            if j + 1 < g.s.len() {
                step(g.theta[i][j], g.theta[i][j + 1]);
            }
        }
    }
    Ok(MonotonicityVerdict { side, comparisons, defect, pass: defect <= tol.as_f64() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::smooth_angle;

    fn dir(spec: AmbientSpec<f64>, rho: f64) -> DirectionSample<f64> {
        DirectionSample::from_rapidity(spec, rho, 0.0).unwrap()
    }

    #[test]
    fn flat_angle_is_constant() {
        let m2 = AmbientSpec::minkowski2();
        let g = angle_estimate(&dir(m2, 0.0), &dir(m2, 1.0), &GridSpec::default()).unwrap();
        let vals: Vec<f64> = g.theta.iter().flatten().flatten().copied().collect();
        assert!(vals.len() > 20);
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-12));
        assert!((g.estimate.unwrap() - 1.0).abs() < 1e-12);
        assert!(g.theta[0][0].is_none());
        assert!(g.warning.is_none());
    }

    #[test]
    fn equal_directions_have_zero_angle() {
        let ds = AmbientSpec::de_sitter(1.0).unwrap();
        let g = angle_estimate(&dir(ds, 0.3), &dir(ds, 0.3), &GridSpec::default()).unwrap();
        assert!(g.estimate.unwrap() < 1e-6);
    }

    #[test]
    fn de_sitter_angle_oracle() {
        let ds = AmbientSpec::de_sitter(1.0).unwrap();
        let (a, b) = (dir(ds, -0.2), dir(ds, 0.5));
        let oracle = smooth_angle(&a, &b).unwrap();
        assert!((oracle - 0.7).abs() < 1e-12);
        let g = angle_estimate(&a, &b, &GridSpec::geometric(3, 14, 1.0).unwrap()).unwrap();
        assert!((g.estimate.unwrap() - 0.7).abs() < 1e-4);
        assert!((g.extrapolated.unwrap() - 0.7).abs() < 1e-4);
    }

    #[test]
    fn grid_rejects_nonpositive() {
        assert!(GridSpec::new(vec![1.0, 0.0], vec![1.0]).is_err());
        assert!(GridSpec::<f64>::geometric(5, 2, 1.0).is_err());
    }

    #[test]
    fn monotonicity_by_ambient() {
        let grid = GridSpec::geometric(1, 8, 1.0).unwrap();
        let m2 = AmbientSpec::minkowski2();
        for side in [BoundSide::Upper, BoundSide::Lower] {
            let v = theta_monotonicity(&dir(m2, 0.0), &dir(m2, 1.0), &grid, side, 1e-12).unwrap();
            assert!(v.pass && v.defect < 1e-12, "{v:?}");
        }
        let ads = AmbientSpec::anti_de_sitter(1.0).unwrap();
        assert!(theta_monotonicity(&dir(ads, 0.0), &dir(ads, 1.0), &grid, BoundSide::Upper, 1e-12).unwrap().pass);
        let ds = AmbientSpec::de_sitter(1.0).unwrap();
        assert!(theta_monotonicity(&dir(ds, 0.0), &dir(ds, 1.0), &grid, BoundSide::Lower, 1e-12).unwrap().pass);
        assert!(!theta_monotonicity(&dir(ds, 0.0), &dir(ds, 1.0), &grid, BoundSide::Upper, 1e-12).unwrap().pass);
    }
}
