//! ε-μ midpoints and the one-sided ε-μ triangle condition.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{BoundSide, SkipCounts, SkipReason};
use crate::error::{Error, Result};
use crate::lorspace::FiniteLorentzSpace;
use crate::model2d::{
    exp_point, ordered_tau, place_vertex, realize_triangle, CurvatureParam, ModelPoint, Side, TriangleSides,
};
use crate::scalar::Scalar;

/// Indices `m` with `|τ(i,m) − μτ(i,j)| < ε` and `|τ(m,j) − (1−μ)τ(i,j)| < ε`.
pub fn find_eps_mu_midpoints<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    i: usize,
    j: usize,
    mu: T,
    eps: T,
) -> Result<Vec<usize>> {
    if !(mu > T::zero() && mu < T::one()) {
        return Err(Error::Range { value: mu.as_f64(), lo: 0.0, hi: 1.0 });
    }
    if !space.timelike(i, j) {
        return Err(Error::Causality(format!("points {i} and {j} are not timelike related")));
    }
    Ok((0..space.len()).filter(|&m| midpoint_defect(space, i, j, m, mu) < eps).collect())
}

fn midpoint_defect<T: Scalar>(space: &FiniteLorentzSpace<T>, i: usize, j: usize, m: usize, mu: T) -> T {
    let t = space.tau(i, j);
    let a = (space.tau(i, m) - mu * t).abs();
    let b = (space.tau(m, j) - (T::one() - mu) * t).abs();
    a.max(b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", bound = "T: Scalar")]
pub struct EpsMuConfig<T> {
    pub eps: Vec<T>,
    pub mus: Vec<T>,
    pub tol: T,
    pub witness_cap: usize,
}

impl<T: Scalar> Default for EpsMuConfig<T> {
    fn default() -> Self {
        Self {
            eps: vec![T::lit(1e-1), T::lit(1e-2), T::lit(1e-3)],
            mus: vec![T::lit(0.25), T::lit(0.5), T::lit(0.75)],
            tol: T::lit(1e-7),
            witness_cap: 20,
        }
    }
}

/// A comparison at the finest ε level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EpsMuWitness {
    pub triangle: [usize; 3],
    pub pair: [usize; 2],
    pub midpoint: usize,
    pub mu: f64,
    pub defect: f64,
    pub deviation: f64,
    pub excess: f64,
}

fn witness_order(a: &EpsMuWitness, b: &EpsMuWitness) -> std::cmp::Ordering {
    b.excess
        .total_cmp(&a.excess)
        .then_with(|| b.deviation.total_cmp(&a.deviation))
        .then_with(|| a.triangle.cmp(&b.triangle))
        .then_with(|| a.pair.cmp(&b.pair))
        .then_with(|| a.midpoint.cmp(&b.midpoint))
        .then_with(|| a.mu.total_cmp(&b.mu))
}

/// Empirical deviation table `g(ε)` of the ε-μ condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EpsMuReport {
    pub check: String,
    pub k: f64,
    pub side: BoundSide,
    pub tol: f64,
    /// Levels in decreasing order.
    pub eps: Vec<f64>,
    pub mus: Vec<f64>,
    /// `g(ε)` against the exact comparison `μ`-point, per level.
    pub deviation: Vec<f64>,
    /// Worst violation against the comparison point with the same separations
    /// to the pair as the midpoint (either side of the pair), per level.
    /// Decides `pass`.
    pub excess: Vec<f64>,
    /// Number of (triangle, pair, μ) configurations with a midpoint at the
    /// finest level; only these contribute to `g`.
    pub configurations: usize,
    pub triangles: usize,
    pub skipped: SkipCounts,
    pub monotone: bool,
    /// Smallest `c` with `g(ε) ≤ c·ε` on the schedule.
    pub slope: f64,
    pub witnesses: Vec<EpsMuWitness>,
    pub pass: bool,
}

/// Decides whether a violation table vanishes on the schedule: `g` must be
/// nonincreasing as `ε` shrinks, and at the finest level no larger than the
/// midpoint defect allowed there, `g(ε_L) ≤ ε_L + tol`. A violated bound
/// leaves a finest-level value of the size of the curvature defect, which
/// does not shrink with ε. Returns `(monotone, pass)`.
pub fn decays<T: Scalar>(eps_desc: &[T], g: &[T], tol: T) -> (bool, bool) {
    let monotone = g.windows(2).all(|w| w[1] <= w[0] + tol);
    let vanishing = match (g.last(), eps_desc.last()) {
        (Some(&last), Some(&finest)) => last <= finest + tol,
        _ => true,
    };
    (monotone, monotone && vanishing)
}

struct Partial<T> {
    g: Vec<T>,
    excess: Vec<T>,
    configurations: usize,
    triangles: usize,
    skipped: SkipCounts,
    witnesses: Vec<EpsMuWitness>,
}

impl<T: Scalar> Partial<T> {
    fn new(levels: usize) -> Self {
        Self {
            g: vec![T::zero(); levels],
            excess: vec![T::zero(); levels],
            configurations: 0,
            triangles: 0,
            skipped: SkipCounts::default(),
            witnesses: vec![],
        }
    }

    fn merge(mut self, other: Self, cap: usize) -> Self {
        for (a, b) in self.g.iter_mut().zip(other.g) {
            *a = a.max(b);
        }
        for (a, b) in self.excess.iter_mut().zip(other.excess) {
            *a = a.max(b);
        }
        self.configurations += other.configurations;
        self.triangles += other.triangles;
        self.skipped.merge(&other.skipped);
        self.witnesses.extend(other.witnesses);
        self.witnesses.sort_by(witness_order);
        self.witnesses.truncate(cap);
        self
    }
}

/// For every timelike triangle, each of its three sides as the designated
/// pair, each `μ` and each ε-μ midpoint `m` of that pair which is timelike
/// related to the remaining vertex `c`, compares `τ` between `c` and `m`
/// with the comparison value between `c̄` and the exact `μ`-point on the
/// comparison side. Deviation in the forbidden direction is recorded.
///
/// `g(ε)` is taken over the configurations resolved by the whole schedule,
/// i.e. those with a midpoint at the finest level, so every level describes
/// the same set of configurations. The pass decision uses the matched
/// comparison point of each midpoint instead of the exact `μ`-point, which
/// removes the first-order effect of the midpoint defect: on a space of
/// constant curvature `K` the matched excess vanishes at every level, while
/// a violated bound leaves an excess that does not shrink with ε.
pub fn eps_mu_condition_scan<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    config: &EpsMuConfig<T>,
) -> EpsMuReport {
    let mut eps = config.eps.clone();
    eps.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let levels = eps.len();
    let n = space.len();
    let cap = config.witness_cap;

    let partials: Vec<Partial<T>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut part = Partial::<T>::new(levels);
            for y in (0..n).filter(|&y| space.timelike(x, y)) {
                for z in (0..n).filter(|&z| space.timelike(y, z)) {
                    let sides = match TriangleSides::new(space.tau(x, y), space.tau(y, z), space.tau(x, z)) {
                        Ok(s) => s,
                        Err(_) => {
                            part.skipped.add(SkipReason::Infeasible);
                            continue;
                        }
                    };
                    if let Err(e) = realize_triangle(param, &sides) {
                        part.skipped.add(match e {
                            Error::SizeBound { .. } => SkipReason::SizeBound,
                            _ => SkipReason::Infeasible,
                        });
                        continue;
                    }
                    part.triangles += 1;
                    for (p, q, c) in [(x, y, z), (y, z, x), (x, z, y)] {
                        for &mu in &config.mus {
                            scan_configuration(space, param, side, &eps, [x, y, z], (p, q, c), mu, &mut part);
                        }
                    }
                }
            }
            part.witnesses.sort_by(witness_order);
            part.witnesses.truncate(cap);
            part
        })
        .collect();
    let total = partials.into_iter().fold(Partial::new(levels), |acc, p| acc.merge(p, cap));
    let (monotone, pass) = decays(&eps, &total.excess, config.tol);
    let slope = eps.iter().zip(&total.g).map(|(&e, &g)| (g / e).as_f64()).fold(0.0, f64::max);
    EpsMuReport {
        check: "eps-mu".into(),
        k: param.k().as_f64(),
        side,
        tol: config.tol.as_f64(),
        eps: eps.iter().map(|e| e.as_f64()).collect(),
        mus: config.mus.iter().map(|m| m.as_f64()).collect(),
        deviation: total.g.iter().map(|g| g.as_f64()).collect(),
        excess: total.excess.iter().map(|g| g.as_f64()).collect(),
        configurations: total.configurations,
        triangles: total.triangles,
        skipped: total.skipped,
        monotone,
        slope,
        witnesses: total.witnesses,
        pass,
    }
}

/// Comparison picture of one designated pair `p ≪ q` in its canonical
/// frame: `p̄` at the origin, `q̄` up the time axis, `c̄` on the positive side.
struct PairFrame<T> {
    tau: T,
    cbar: ModelPoint<T>,
    mbar: ModelPoint<T>,
}

/// `τ̃` between `c̄` and `x` in the time order `c_first` of the real pair.
fn model_sep<T: Scalar>(param: &CurvatureParam<T>, cbar: &ModelPoint<T>, x: &ModelPoint<T>, c_first: bool) -> T {
    let r = if c_first { ordered_tau(param, cbar, x) } else { ordered_tau(param, x, cbar) };
    r.unwrap_or_else(|_| T::zero())
}

/// Range of `τ̃(c̄, m̄')` over the two comparison points `m̄'` with
/// `τ̃(p̄, m̄') = τ(p, m)` and `τ̃(m̄', q̄) = τ(m, q)`.
fn matched_range<T: Scalar>(
    param: &CurvatureParam<T>,
    frame: &PairFrame<T>,
    tpm: T,
    tmq: T,
    c_first: bool,
) -> Option<(T, T)> {
    let mut vals = [Side::Positive, Side::Negative].into_iter().map(|side| {
        place_vertex(param, frame.tau, tpm, tmq, side).ok().map(|x| model_sep(param, &frame.cbar, &x, c_first))
    });
    let (u, v) = (vals.next()??, vals.next()??);
    Some((u.min(v), u.max(v)))
}

/// Evaluates one (triangle, designated pair, μ) configuration at every
/// level of the schedule and folds it into `part` when the finest level has
/// a midpoint.
#[allow(clippy::too_many_arguments)]
fn scan_configuration<T: Scalar>(
    space: &FiniteLorentzSpace<T>,
    param: &CurvatureParam<T>,
    side: BoundSide,
    eps: &[T],
    triangle: [usize; 3],
    (p, q, c): (usize, usize, usize),
    mu: T,
    part: &mut Partial<T>,
) {
    let levels = eps.len();
    let (Some(&eps_max), Some(&finest)) = (eps.first(), eps.last()) else {
        return;
    };
    let tau = space.tau(p, q);
    let tpc = space.tau(p, c).max(space.tau(c, p));
    let tqc = space.tau(q, c).max(space.tau(c, q));
    let Ok(cbar) = place_vertex(param, tau, tpc, tqc, Side::Positive) else {
        return;
    };
    let mbar = exp_point(param, &param.origin(), &param.time_axis(), mu * tau);
    let frame = PairFrame { tau, cbar, mbar };

    let mut literal: Vec<Option<T>> = vec![None; levels];
    let mut excess: Vec<Option<T>> = vec![None; levels];
    let mut finest_hits = Vec::new();
    for m in 0..space.len() {
        let defect = midpoint_defect(space, p, q, m, mu);
        if !(defect < eps_max) {
            continue;
        }
        let (real, c_first) = if space.timelike(c, m) {
            (space.tau(c, m), true)
        } else if space.timelike(m, c) {
            (space.tau(m, c), false)
        } else {
            continue;
        };
        let model = model_sep(param, &frame.cbar, &frame.mbar, c_first);
        let dev = match side {
            BoundSide::Upper => real - model,
            BoundSide::Lower => model - real,
        }
        .max(T::zero());
        let ex = if space.timelike(p, m) && space.timelike(m, q) {
            matched_range(param, &frame, space.tau(p, m), space.tau(m, q), c_first).map(|(lo, hi)| {
                match side {
                    BoundSide::Upper => real - hi,
                    BoundSide::Lower => lo - real,
                }
                .max(T::zero())
            })
        } else {
            None
        };
        for (lvl, &e) in eps.iter().enumerate() {
            if !(defect < e) {
                continue;
            }
            literal[lvl] = Some(literal[lvl].map_or(dev, |d: T| d.max(dev)));
            if let Some(ex) = ex {
                excess[lvl] = Some(excess[lvl].map_or(ex, |d: T| d.max(ex)));
            }
        }
        let ex_finest = ex;
        if defect < finest {
            finest_hits.push((m, defect, dev, ex_finest.unwrap_or_else(T::zero)));
        }
    }
    if finest_hits.is_empty() {
        return;
    }
    part.configurations += 1;
    for (g, d) in part.g.iter_mut().zip(&literal) {
        if let Some(d) = *d {
            *g = g.max(d);
        }
    }
    for (g, d) in part.excess.iter_mut().zip(&excess) {
        if let Some(d) = *d {
            *g = g.max(d);
        }
    }
    for (m, defect, dev, ex) in finest_hits {
        if dev > T::zero() || ex > T::zero() {
            part.witnesses.push(EpsMuWitness {
                triangle,
                pair: [p, q],
                midpoint: m,
                mu: mu.as_f64(),
                defect: defect.as_f64(),
                deviation: dev.as_f64(),
                excess: ex.as_f64(),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorspace::{space_from_points, AmbientSpec};

    fn three_points(mx: f64) -> FiniteLorentzSpace<f64> {
        let spec = AmbientSpec::minkowski2();
        space_from_points(&spec, vec![[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, mx, 0.0]]).unwrap()
    }

    #[test]
    fn exact_midpoint_is_found() {
        let s = three_points(0.0);
        assert!(find_eps_mu_midpoints(&s, 0, 1, 0.5, 0.1).unwrap().contains(&2));
    }

    #[test]
    fn off_axis_midpoints() {
        assert!(find_eps_mu_midpoints(&three_points(0.3), 0, 1, 0.5, 0.1).unwrap().contains(&2));
        assert!(!find_eps_mu_midpoints(&three_points(0.5), 0, 1, 0.5, 0.1).unwrap().contains(&2));
    }

    #[test]
    fn non_timelike_pair_is_rejected() {
        let s = three_points(0.0);
        assert!(matches!(find_eps_mu_midpoints(&s, 1, 0, 0.5, 0.1), Err(Error::Causality(_))));
    }

    #[test]
    fn decay_rule() {
        let eps = [1e-1, 1e-2, 1e-3];
        assert_eq!(decays(&eps, &[0.0, 0.0, 0.0], 1e-9), (true, true));
        assert_eq!(decays(&eps, &[0.1, 0.01, 0.001], 1e-9), (true, true));
        assert_eq!(decays(&eps, &[0.1, 0.05, 0.049], 1e-9), (true, false));
        assert_eq!(decays(&eps, &[0.01, 0.01, 0.01], 1e-9), (true, false));
        assert_eq!(decays(&eps, &[0.01, 0.05, 0.0], 1e-9), (false, false));
    }
}
