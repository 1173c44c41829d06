//! The four-point condition: two comparison triangles glued along a common
//! edge, compared against one further time separation of the quadruple.
//!
//! The two pictures carry their traditional names, which follow the sign
//! convention where an upper bound asks for `τ ≥ τ̃`. Under the convention of
//! [`BoundSide`] the roles swap: the single-gluing picture of
//! [`four_point_lower_margin`] certifies an upper bound, and the pair of
//! pictures in [`four_point_upper_margins`] certifies a lower bound.
//! [`four_point_verdict`] and the scans apply this mapping.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{push_witness, BoundSide, ScanReport, SkipCounts, SkipReason, Verdict, Witness};
use crate::error::{Error, Result};
use crate::lorspace::FiniteLorentzSpace;
use crate::model2d::{ordered_tau, place_vertex, CurvatureParam, ModelKind, ModelPoint, Side, TriangleSides};
use crate::scalar::Scalar;

/// Time separations of a quadruple `x1 ≪ x2 ≪ x3 ≤ x4` (or `≪` throughout).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadrupleTaus<T> {
    pub t12: T,
    pub t13: T,
    pub t14: T,
    pub t23: T,
    pub t24: T,
    pub t34: T,
}

impl<T: Scalar> QuadrupleTaus<T> {
    /// Reads the six values of indices `(i, j, k, l)` from a space.
    pub fn from_space(space: &FiniteLorentzSpace<T>, i: usize, j: usize, k: usize, l: usize) -> Self {
        Self {
            t12: space.tau(i, j),
            t13: space.tau(i, k),
            t14: space.tau(i, l),
            t23: space.tau(j, k),
            t24: space.tau(j, l),
            t34: space.tau(k, l),
        }
    }

    fn validate(&self) -> Result<()> {
        TriangleSides::new(self.t12, self.t23, self.t13)?;
        TriangleSides::new(self.t12, self.t24, self.t14)?;
        TriangleSides::new(self.t13, self.t34, self.t14)?;
        TriangleSides::new(self.t23, self.t34, self.t24)?;
        Ok(())
    }

    fn exceeds_diameter(&self, param: &CurvatureParam<T>) -> bool {
        param.kind() == ModelKind::AntiDeSitter && self.t14 >= param.diameter()
    }
}

/// Relative placement of the two glued triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gluing {
    Opposite,
    Same,
}

impl Gluing {
    fn second_side(self) -> Side {
        match self {
            Gluing::Opposite => Side::Negative,
            Gluing::Same => Side::Positive,
        }
    }
}

/// Gluing choices for the three comparison pictures, plus the number of
/// witnesses kept by scans.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FourPointConfig {
    pub lower: Gluing,
    pub upper_first: Gluing,
    pub upper_second: Gluing,
    pub witness_cap: usize,
}

impl Default for FourPointConfig {
    fn default() -> Self {
        Self { lower: Gluing::Opposite, upper_first: Gluing::Opposite, upper_second: Gluing::Same, witness_cap: 20 }
    }
}

fn skip_reason(e: &Error) -> Option<SkipReason> {
    match e {
        Error::SizeBound { .. } => Some(SkipReason::SizeBound),
        Error::Infeasible(_) | Error::InvalidTimelikeTriangle { .. } => Some(SkipReason::Infeasible),
        _ => None,
    }
}

/// Places two points against the shared edge `P → Q` of length `shared`:
/// the first on the positive side, the second as `gluing` dictates.
fn glue<T: Scalar>(
    param: &CurvatureParam<T>,
    shared: T,
    first: (T, T),
    second: (T, T),
    gluing: Gluing,
) -> Result<(ModelPoint<T>, ModelPoint<T>)> {
    let a = place_vertex(param, shared, first.0, first.1, Side::Positive)?;
    let b = place_vertex(param, shared, second.0, second.1, gluing.second_side())?;
    Ok((a, b))
}

fn finish<T: Scalar>(margins: Result<Vec<T>>, tol: T) -> Result<Verdict<T>> {
    match margins {
        Ok(m) => Ok(Verdict::from_margins(m, tol)),
        Err(e) => match skip_reason(&e) {
            Some(reason) => Ok(Verdict::skipped(reason)),
            None => Err(e),
        },
    }
}

/// Lower four-point condition: `τ(x3, x4) ≥ τ̃(x̃3, x̃4)` for the triangles
/// `x1x2x3` and `x1x2x4` glued along `x1x2` on opposite sides.
pub fn four_point_lower_margin<T: Scalar>(
    param: &CurvatureParam<T>,
    q: &QuadrupleTaus<T>,
    tol: T,
) -> Result<Verdict<T>> {
    four_point_lower_margin_with(param, q, tol, Gluing::Opposite)
}

pub fn four_point_lower_margin_with<T: Scalar>(
    param: &CurvatureParam<T>,
    q: &QuadrupleTaus<T>,
    tol: T,
    gluing: Gluing,
) -> Result<Verdict<T>> {
    if !(q.t12 > T::zero() && q.t23 > T::zero()) {
        return Err(Error::Domain("lower four-point condition needs x1 ≪ x2 ≪ x3".into()));
    }
    q.validate()?;
    if q.exceeds_diameter(param) {
        return Ok(Verdict::skipped(SkipReason::SizeBound));
    }
    let margins = glue(param, q.t12, (q.t13, q.t23), (q.t14, q.t24), gluing)
        .and_then(|(x3, x4)| ordered_tau(param, &x3, &x4))
        .map(|t34| vec![q.t34 - t34]);
    finish(margins, tol)
}

/// Upper four-point condition. Margin one compares `τ(x2, x3)` with the
/// picture glued along `x1x4` (opposite sides); margin two compares
/// `τ(x1, x4)` with the picture glued along `x2x3` (same side). Both must be
/// nonnegative.
pub fn four_point_upper_margins<T: Scalar>(
    param: &CurvatureParam<T>,
    q: &QuadrupleTaus<T>,
    tol: T,
) -> Result<Verdict<T>> {
    four_point_upper_margins_with(param, q, tol, Gluing::Opposite, Gluing::Same)
}

pub fn four_point_upper_margins_with<T: Scalar>(
    param: &CurvatureParam<T>,
    q: &QuadrupleTaus<T>,
    tol: T,
    first: Gluing,
    second: Gluing,
) -> Result<Verdict<T>> {
    if !(q.t12 > T::zero() && q.t23 > T::zero() && q.t34 > T::zero()) {
        return Err(Error::Domain("upper four-point condition needs x1 ≪ x2 ≪ x3 ≪ x4".into()));
    }
    q.validate()?;
    if q.exceeds_diameter(param) {
        return Ok(Verdict::skipped(SkipReason::SizeBound));
    }
    let margins = (|| {
        let (x2, x3) = glue(param, q.t14, (q.t12, q.t24), (q.t13, q.t34), first)?;
        let m1 = q.t23 - ordered_tau(param, &x2, &x3)?;
        let (x1, x4) = glue(param, q.t23, (q.t12, q.t13), (q.t24, q.t34), second)?;
        let m2 = ordered_tau(param, &x1, &x4)? - q.t14;
        Ok(vec![m1, m2])
    })();
    finish(margins, tol)
}

/// Four-point verdict for `side` in the convention of [`BoundSide`].
pub fn four_point_verdict<T: Scalar>(
    param: &CurvatureParam<T>,
    q: &QuadrupleTaus<T>,
    side: BoundSide,
    tol: T,
    config: &FourPointConfig,
) -> Result<Verdict<T>> {
    match side {
        BoundSide::Upper => four_point_lower_margin_with(param, q, tol, config.lower),
        BoundSide::Lower => four_point_upper_margins_with(param, q, tol, config.upper_first, config.upper_second),
    }
}

/// Whether `(i, j, k, l)` has the causal pattern evaluated for `side`.
fn pattern_matches<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    side: BoundSide,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> bool {
    match side {
        BoundSide::Upper => l != k && l != i && l != j && space.causal(k, l),
        BoundSide::Lower => space.timelike(k, l),
    }
}

#[derive(Default)]
struct Partial {
    enumerated: usize,
    tested: usize,
    skipped: SkipCounts,
    violations: usize,
    worst: Option<f64>,
    witnesses: Vec<Witness>,
}

impl Partial {
    fn merge(mut self, other: Partial, cap: usize) -> Partial {
        self.enumerated += other.enumerated;
        self.tested += other.tested;
        self.skipped.merge(&other.skipped);
        self.violations += other.violations;
        self.worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for w in other.witnesses {
            push_witness(&mut self.witnesses, w, cap);
        }
        self
    }
}

pub fn scan_four_point<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    tol: T,
) -> ScanReport {
    scan_four_point_with(space, param, side, tol, &FourPointConfig::default())
}

/// Evaluates the four-point condition on every index quadruple matching
/// the causal pattern of `side`. Per-row partial results are merged in
/// index order, so the report does not depend on the worker count.
pub fn scan_four_point_with<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    tol: T,
    config: &FourPointConfig,
) -> ScanReport {
    let n = space.len();
    let cap = config.witness_cap;
    let partials: Vec<Partial> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut part = Partial::default();
            for j in (0..n).filter(|&j| space.timelike(i, j)) {
                for k in (0..n).filter(|&k| space.timelike(j, k)) {
                    for l in 0..n {
                        if !pattern_matches(space, side, i, j, k, l) {
                            continue;
                        }
                        part.enumerated += 1;
                        let q = QuadrupleTaus::from_space(space, i, j, k, l);
                        let verdict = match four_point_verdict(param, &q, side, tol, config) {
                            Ok(v) => v,
                            Err(e) => {
                                part.skipped.add(skip_reason(&e).unwrap_or(SkipReason::Infeasible));
                                continue;
                            }
                        };
                        if let Some(reason) = verdict.skipped {
                            part.skipped.add(reason);
                            continue;
                        }
                        part.tested += 1;
                        let worst = verdict.worst().map(Scalar::as_f64).unwrap_or(0.0);
                        part.worst = Some(part.worst.map_or(worst, |w| w.min(worst)));
                        if !verdict.pass {
                            part.violations += 1;
                        }
                        push_witness(&mut part.witnesses, Witness { indices: vec![i, j, k, l], margin: worst }, cap);
                    }
                }
            }
            part
        })
        .collect();
    let total = partials.into_iter().fold(Partial::default(), |acc, p| acc.merge(p, cap));
    ScanReport {
        check: "four-point".into(),
        k: param.k().as_f64(),
        side,
        tol: tol.as_f64(),
        enumerated: total.enumerated,
        tested: total.tested,
        skipped: total.skipped,
        violations: total.violations,
        worst_margin: total.worst,
        witnesses: total.witnesses,
        pass: total.violations == 0,
    }
}
