//! Rescaled time separations `λ⁻¹ τ(exp_p(λ r_i, d_i), exp_p(λ r_j, d_j))`
//! against their Minkowski-cone limit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{angle_estimate, DirectionSample, GridSpec};
use crate::cone::{cone_tau, ConePoint};
use crate::curvcheck::{four_point_verdict, BoundSide, FourPointConfig, QuadrupleTaus};
use crate::error::{Error, Result};
use crate::lorspace::ambient_ordered_tau;
use crate::model2d::CurvatureParam;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BlowupItem<T> {
    pub r: T,
    pub d: DirectionSample<T>,
}

/// Worst four-point margins of the cone limit of a four-item chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeFourPoint {
    pub upper: f64,
    pub lower: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupTable {
    pub lambdas: Vec<f64>,
    /// `values[k][i][j] = λ_k⁻¹ τ(a_i, a_j)`.
    pub values: Vec<Vec<Vec<f64>>>,
    /// Estimated angles `∠(d_i, d_j)`.
    pub angles: Vec<Vec<f64>>,
    /// Cone separations `τ̄(ā_i, ā_j)`.
    pub reference: Vec<Vec<f64>>,
    /// Largest `|values − reference|` per `λ`.
    pub errors: Vec<f64>,
    /// Per-pair error at the last `λ`.
    pub final_errors: Vec<Vec<f64>>,
    pub four_point: Option<ConeFourPoint>,
}

/// One CSV row of a blow-up table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlowupRow {
    pub lambda: f64,
    pub i: usize,
    pub j: usize,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
}

impl BlowupTable {
    /// Rows for every ordered pair `i ≠ j` with a nonzero value or reference.
    pub fn rows(&self) -> Vec<BlowupRow> {
        let mut out = Vec::new();
        for (k, &lambda) in self.lambdas.iter().enumerate() {
            for (i, row) in self.values[k].iter().enumerate() {
                for (j, &value) in row.iter().enumerate() {
                    let reference = self.reference[i][j];
                    if i != j && (value > 0.0 || reference > 0.0) {
                        out.push(BlowupRow { lambda, i, j, value, reference, error: (value - reference).abs() });
                    }
                }
            }
        }
        out
    }
}

/// Fills the blow-up table over `lambdas` (in the given order) and, for a
/// four-item chain of the cone, evaluates both four-point conditions at
/// `K = 0` on the limit values.
pub fn blowup_table<T: Scalar>(items: &[BlowupItem<T>], lambdas: &[T]) -> Result<BlowupTable> {
    let Some(first) = items.first() else {
        return Err(Error::Domain("blow-up needs at least one item".into()));
    };
    if items.iter().any(|it| it.d.ambient != first.d.ambient || it.d.p != first.d.p) {
        return Err(Error::Domain("all items must share the base point".into()));
    }
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > T::zero())) {
        return Err(Error::Domain("lambda values must be positive".into()));
    }
    let n = items.len();
    let grid = GridSpec::default();
    let mut angles = vec![vec![0.0; n]; n];
    let mut reference = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i < j {
                let est = angle_estimate(&items[i].d, &items[j].d, &grid)?
                    .estimate
                    .ok_or_else(|| Error::Numerical(format!("no angle estimate between directions {i} and {j}")))?;
                angles[i][j] = est;
                angles[j][i] = est;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let (p, q) = (ConePoint::new(items[i].r, i)?, ConePoint::new(items[j].r, j)?);
                reference[i][j] = cone_tau(&p, &q, T::lit(angles[i][j]))?.tau.as_f64();
            }
        }
    }
    let spec = first.d.ambient;
    let values: Vec<Vec<Vec<f64>>> = lambdas
        .par_iter()
        .map(|&lambda| {
            let pts = items.iter().map(|it| it.d.point(lambda * it.r)).collect::<Result<Vec<_>>>()?;
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| Ok((ambient_ordered_tau(&spec, &pts[i], &pts[j])? / lambda).as_f64()))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let pair_errors = |k: usize| -> Vec<Vec<f64>> {
        (0..n).map(|i| (0..n).map(|j| (values[k][i][j] - reference[i][j]).abs()).collect()).collect()
    };
    let errors: Vec<f64> =
        (0..lambdas.len()).map(|k| pair_errors(k).iter().flatten().fold(0.0f64, |m, &e| m.max(e))).collect();
    let final_errors = pair_errors(lambdas.len() - 1);
    let four_point = if n == 4 && (0..3).all(|i| reference[i][i + 1] > 0.0) {
        let r = &reference;
        let q = QuadrupleTaus { t12: r[0][1], t13: r[0][2], t14: r[0][3], t23: r[1][2], t24: r[1][3], t34: r[2][3] };
        let k0 = CurvatureParam::<f64>::flat();
        let cfg = FourPointConfig::default();
        let tol = 1e-6;
        let upper = four_point_verdict(&k0, &q, BoundSide::Upper, tol, &cfg)?;
        let lower = four_point_verdict(&k0, &q, BoundSide::Lower, tol, &cfg)?;
        Some(ConeFourPoint {
            upper: upper.worst().unwrap_or(0.0),
            lower: lower.worst().unwrap_or(0.0),
            pass: upper.pass && lower.pass,
        })
    } else {
        None
    };
    Ok(BlowupTable {
        lambdas: lambdas.iter().map(|l| l.as_f64()).collect(),
        values,
        angles,
        reference,
        errors,
        final_errors,
        four_point,
    })
}
