//! One-sided triangle comparison on analytic ambients, where distance
//! realizers are available in closed form.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{push_witness, BoundSide, SkipCounts, SkipReason, Witness};
use crate::error::{Error, Result};
use crate::lorspace::{ambient_geodesic, ambient_ordered_tau, AmbientSpec, FiniteLorentzSpace};
use crate::model2d::{geodesic_interpolate, ordered_tau, realize_triangle, CurvatureParam, ModelPoint, TriangleSides};
use crate::scalar::{Scalar, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TriangleReport {
    pub check: String,
    pub k: f64,
    pub side: BoundSide,
    pub tol: f64,
    pub triangles: usize,
    pub samples: usize,
    pub skipped: SkipCounts,
    pub violations: usize,
    pub worst_margin: Option<f64>,
    /// Indices are `[triangle vertices…, side, sample]` with sides numbered
    /// `xy = 0`, `yz = 1`, `xz = 2`.
    pub witnesses: Vec<Witness>,
    pub pass: bool,
}

impl TriangleReport {
    fn empty<T: Scalar>(param: &CurvatureParam<T>, side: BoundSide, tol: T) -> Self {
        Self {
            check: "triangle".into(),
            k: param.k().as_f64(),
            side,
            tol: tol.as_f64(),
            triangles: 0,
            samples: 0,
            skipped: SkipCounts::default(),
            violations: 0,
            worst_margin: None,
            witnesses: vec![],
            pass: true,
        }
    }

    fn merge(mut self, other: TriangleReport, cap: usize) -> Self {
        self.triangles += other.triangles;
        self.samples += other.samples;
        self.skipped.merge(&other.skipped);
        self.violations += other.violations;
        self.worst_margin = match (self.worst_margin, other.worst_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for w in other.witnesses {
            push_witness(&mut self.witnesses, w, cap);
        }
        self.pass = self.violations == 0;
        self
    }
}

/// Signed margin between the real and comparison separations of `c` and
/// `m`, in both time orders; negative values violate `side`.
fn pair_margin<T: Scalar>(
    spec: &AmbientSpec<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    c: &Vec3<T>,
    m: &Vec3<T>,
    cbar: &ModelPoint<T>,
    mbar: &ModelPoint<T>,
) -> Result<T> {
    let real = [ambient_ordered_tau(spec, c, m)?, ambient_ordered_tau(spec, m, c)?];
    let model = [ordered_tau(param, cbar, mbar)?, ordered_tau(param, mbar, cbar)?];
    let margin = |r: T, t: T| match side {
        BoundSide::Lower => r - t,
        BoundSide::Upper => t - r,
    };
    Ok(margin(real[0], model[0]).min(margin(real[1], model[1])))
}

/// Samples `samples_per_side` interior points on each realizer of the
/// triangle `x ≪ y ≪ z`, places the matching comparison points, and checks
/// the separation to the opposite vertex against its comparison value.
pub fn triangle_condition_check<T: Scalar>(
    spec: &AmbientSpec<T>,
    vertices: &[Vec3<T>; 3],
    param: &CurvatureParam<T>,
    side: BoundSide,
    samples_per_side: usize,
    tol: T,
) -> Result<TriangleReport> {
    check_one(spec, vertices, [0, 1, 2], param, side, samples_per_side, tol, 20)
}

#[allow(clippy::too_many_arguments)]
fn check_one<T: Scalar>(
    spec: &AmbientSpec<T>,
    v: &[Vec3<T>; 3],
    labels: [usize; 3],
    param: &CurvatureParam<T>,
    side: BoundSide,
    samples_per_side: usize,
    tol: T,
    cap: usize,
) -> Result<TriangleReport> {
    let mut report = TriangleReport::empty(param, side, tol);
    let a = ambient_ordered_tau(spec, &v[0], &v[1])?;
    let b = ambient_ordered_tau(spec, &v[1], &v[2])?;
    let c = ambient_ordered_tau(spec, &v[0], &v[2])?;
    if !(a > T::zero() && b > T::zero() && c > T::zero()) {
        return Err(Error::Causality("triangle vertices must satisfy x ≪ y ≪ z".into()));
    }
    let tri = match TriangleSides::new(a, b, c).and_then(|s| realize_triangle(param, &s)) {
        Ok(t) => t,
        Err(Error::SizeBound { .. }) => {
            report.skipped.add(SkipReason::SizeBound);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    report.triangles = 1;
    let bars = [tri.px, tri.py, tri.pz];
    // (start, end, opposite) for the sides xy, yz, xz.
    let sides = [(0, 1, 2), (1, 2, 0), (0, 2, 1)];
    for (s_idx, &(p, q, o)) in sides.iter().enumerate() {
        let len = ambient_ordered_tau(spec, &v[p], &v[q])?;
        let model_len = [a, b, c][s_idx];
        for k in 1..=samples_per_side {
            let f = T::from_index(k) / T::from_index(samples_per_side + 1);
            let m = ambient_geodesic(spec, &v[p], &v[q], f * len)?;
            let mbar = geodesic_interpolate(param, &bars[p], &bars[q], f * model_len)?;
            let margin = match pair_margin(spec, param, side, &v[o], &m, &bars[o], &mbar) {
                Ok(x) => x,
                Err(Error::SizeBound { .. }) => {
                    report.skipped.add(SkipReason::SizeBound);
                    continue;
                }
                Err(e) => return Err(e),
            };
            report.samples += 1;
            let m64 = margin.as_f64();
            report.worst_margin = Some(report.worst_margin.map_or(m64, |w| w.min(m64)));
            if margin < -tol {
                report.violations += 1;
            }
            let mut indices = labels.to_vec();
            indices.extend([s_idx, k]);
            push_witness(&mut report.witnesses, Witness { indices, margin: m64 }, cap);
        }
    }
    report.pass = report.violations == 0;
    Ok(report)
}

/// Runs the triangle check on every timelike triangle of a generated space,
/// using its ambient coordinates.
pub fn triangle_condition_scan<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    samples_per_side: usize,
    tol: T,
) -> Result<TriangleReport> {
    let prov =
        space.provenance().ok_or_else(|| Error::Structural("triangle check needs ambient coordinates".into()))?;
    let n = space.len();
    let cap = 20;
    let parts: Vec<Result<TriangleReport>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut part = TriangleReport::empty(param, side, tol);
            for y in (0..n).filter(|&y| space.timelike(x, y)) {
                for z in (0..n).filter(|&z| space.timelike(y, z)) {
                    let v = [prov.coords[x], prov.coords[y], prov.coords[z]];
                    let r = check_one(&prov.ambient, &v, [x, y, z], param, side, samples_per_side, tol, cap)?;
                    part = part.merge(r, cap);
                }
            }
            Ok(part)
        })
        .collect();
    let mut total = TriangleReport::empty(param, side, tol);
    for p in parts {
        total = total.merge(p?, cap);
    }
    Ok(total)
}
