//! Analytic base samples: points of a line, the hyperbolic plane or the
//! Euclidean plane with exact distances, plus random tree metrics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{cone_tau, transfer_quantities, ConePoint, FiniteMetricSpace, TransferQuantities};
use crate::error::{Error, Result};
use crate::hyperbolic::{h2_distance, h2_geodesic, HPoint};
use crate::scalar::{euclid_dist3, lin3, Scalar, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaseModel {
    /// The real line; coordinates `[y, 0, 0]`.
    Line,
    /// The hyperboloid model of `H²`.
    Hyperbolic,
    /// The Euclidean plane; coordinates `[x, y, 0]`.
    Euclidean,
}

/// Points of an analytic base with their coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BaseSample<T> {
    pub model: BaseModel,
    pub coords: Vec<Vec3<T>>,
}

impl<T: Scalar> BaseSample<T> {
    pub fn line(positions: &[T]) -> Self {
        Self { model: BaseModel::Line, coords: positions.iter().map(|&y| [y, T::zero(), T::zero()]).collect() }
    }

    /// `n` equally spaced points of `[lo, hi]`.
    pub fn line_grid(n: usize, lo: T, hi: T) -> Self {
        let step = if n > 1 { (hi - lo) / T::from_index(n - 1) } else { T::zero() };
        let pos: Vec<T> = (0..n).map(|i| lo + step * T::from_index(i)).collect();
        Self::line(&pos)
    }

    /// `n` points uniform by area in the hyperbolic disc of radius `radius`.
    pub fn hyperbolic_disc(n: usize, radius: T, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..n)
            .map(|_| {
                let u = T::lit(rng.gen::<f64>());
                let phi = T::lit(rng.gen::<f64>()) * T::two() * T::PI();
                let r = (T::one() + u * (radius.cosh() - T::one())).acosh();
                HPoint::from_polar(r, phi).coords
            })
            .collect();
        Self { model: BaseModel::Hyperbolic, coords }
    }

    /// `n` points uniform by area in the Euclidean disc of radius `radius`.
    pub fn euclidean_disc(n: usize, radius: T, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..n)
            .map(|_| {
                let r = radius * T::lit(rng.gen::<f64>()).sqrt();
                let phi = T::lit(rng.gen::<f64>()) * T::two() * T::PI();
                [r * phi.cos(), r * phi.sin(), T::zero()]
            })
            .collect();
        Self { model: BaseModel::Euclidean, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance_between(&self, a: &Vec3<T>, b: &Vec3<T>) -> T {
        match self.model {
            BaseModel::Line => (a[0] - b[0]).abs(),
            BaseModel::Euclidean => euclid_dist3(a, b),
            BaseModel::Hyperbolic => h2_distance(&HPoint { coords: *a }, &HPoint { coords: *b }),
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> T {
        self.distance_between(&self.coords[i], &self.coords[j])
    }

    /// Point at distance `s` from `a` on the geodesic through `b`.
    pub fn geodesic_point(&self, a: &Vec3<T>, b: &Vec3<T>, s: T) -> Vec3<T> {
        let d = self.distance_between(a, b);
        if d == T::zero() {
            return *a;
        }
        let f = s / d;
        match self.model {
            BaseModel::Line | BaseModel::Euclidean => lin3(T::one() - f, a, f, b),
            BaseModel::Hyperbolic => h2_geodesic(&HPoint { coords: *a }, &HPoint { coords: *b }, f).coords,
        }
    }

    pub fn metric(&self) -> Result<FiniteMetricSpace<T>> {
        FiniteMetricSpace::from_fn(self.len(), |i, j| self.distance(i, j))
    }

    /// Appends analytic `ε`-midpoints for the pairs `(2k, 2k+1)`, `k < pairs`:
    /// for every `ε` one point on the realizer at `ε/2` from the midpoint,
    /// alternating sides. Returns the pairs used.
    pub fn with_eps_midpoints(mut self, pairs: usize, eps: &[T]) -> Result<(Self, Vec<(usize, usize)>)> {
        let n = self.len();
        if 2 * pairs > n {
            return Err(Error::Generation(format!("{pairs} midpoint pairs need at least {} base points", 2 * pairs)));
        }
        let mut used = Vec::with_capacity(pairs);
        for k in 0..pairs {
            let (a, b) = (self.coords[2 * k], self.coords[2 * k + 1]);
            let half = self.distance_between(&a, &b) / T::two();
            for (l, &e) in eps.iter().enumerate() {
                let sign = if (k + l) % 2 == 0 { T::one() } else { -T::one() };
                let p = self.geodesic_point(&a, &b, half + sign * e / T::two());
                self.coords.push(p);
            }
            used.push((2 * k, 2 * k + 1));
        }
        Ok((self, used))
    }

    /// Measures how the two `μ`-midpoint defects of `(r_m, y_m)` grow when
    /// the exact base midpoint `y_m` of `(y_i, y_j)` is moved by `ε` along
    /// the realizer, and fits `defect = slope·ε + c·ε²`.
    pub fn transfer_fit(&self, i: usize, j: usize, r2: T, r3: T, eps: &[T]) -> Result<TransferFit> {
        let (a, b) = (self.coords[i], self.coords[j]);
        let d23 = self.distance_between(&a, &b);
        let q: TransferQuantities<T> = transfer_quantities(r2, r3, d23)?;
        let x2 = ConePoint::new(r2, i)?;
        let x3 = ConePoint::new(r3, j)?;
        let tau23 = cone_tau(&x2, &x3, d23)?.tau;
        let xm = ConePoint::new(q.r_m, usize::MAX)?;
        let mut rows = Vec::with_capacity(eps.len());
        for &e in eps {
            let y = self.geodesic_point(&a, &b, d23 / T::two() + e);
            let t2m = cone_tau(&x2, &xm, self.distance_between(&a, &y))?.tau;
            let tm3 = cone_tau(&xm, &x3, self.distance_between(&y, &b))?.tau;
            let defect = (t2m - q.mu * tau23).abs().max((tm3 - (T::one() - q.mu) * tau23).abs());
            rows.push(TransferRow {
                eps: e.as_f64(),
                defect: defect.as_f64(),
                predicted: (q.eps_coefficient * e).as_f64(),
            });
        }
        let (slope, quadratic) = fit_linear_quadratic(&rows);
        let coefficient = q.eps_coefficient.as_f64();
        Ok(TransferFit {
            mu: q.mu.as_f64(),
            r_m: q.r_m.as_f64(),
            eps_coefficient: coefficient,
            slope,
            quadratic,
            relative_error: (slope - coefficient).abs() / coefficient,
            rows,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransferRow {
    pub eps: f64,
    pub defect: f64,
    pub predicted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferFit {
    pub mu: f64,
    pub r_m: f64,
    pub eps_coefficient: f64,
    pub slope: f64,
    pub quadratic: f64,
    pub relative_error: f64,
    pub rows: Vec<TransferRow>,
}

/// Least squares for `y = a x + c x²` through the origin.
fn fit_linear_quadratic(rows: &[TransferRow]) -> (f64, f64) {
    let (mut s2, mut s3, mut s4, mut sy1, mut sy2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for r in rows {
        let x = r.eps;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
        sy1 += r.defect * x;
        sy2 += r.defect * x * x;
    }
    let det = s2 * s4 - s3 * s3;
    if rows.len() < 2 || det.abs() <= f64::MIN_POSITIVE {
        return (if s2 > 0.0 { sy1 / s2 } else { 0.0 }, 0.0);
    }
    ((sy1 * s4 - sy2 * s3) / det, (s2 * sy2 - s3 * sy1) / det)
}

/// Random weighted tree on `n` vertices: vertex `i` hangs off a uniformly
/// chosen earlier vertex with an edge length in `[0.2, 1)`.
pub fn random_tree<T: Scalar>(n: usize, seed: u64) -> Result<FiniteMetricSpace<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parent = vec![0usize; n];
    let mut depth = vec![T::zero(); n];
    let mut level = vec![0usize; n];
    for i in 1..n {
        parent[i] = rng.gen_range(0..i);
        depth[i] = depth[parent[i]] + T::lit(rng.gen_range(0.2..1.0));
        level[i] = level[parent[i]] + 1;
    }
    let lca = |mut a: usize, mut b: usize| {
        while a != b {
            if level[a] >= level[b] {
                a = parent[a];
            } else {
                b = parent[b];
            }
        }
        a
    };
    FiniteMetricSpace::from_fn(n, |i, j| depth[i] + depth[j] - T::two() * depth[lca(i, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_metric() {
        for s in [
            BaseSample::<f64>::line_grid(7, -1.0, 2.0),
            BaseSample::hyperbolic_disc(12, 1.0, 3),
            BaseSample::euclidean_disc(12, 1.0, 3),
        ] {
            let m = s.metric().unwrap();
            assert_eq!(m.len(), s.len());
        }
        assert_eq!(random_tree::<f64>(15, 1).unwrap().len(), 15);
    }

    #[test]
    fn hyperbolic_disc_respects_radius() {
        let s = BaseSample::<f64>::hyperbolic_disc(50, 0.8, 9);
        let o = [1.0, 0.0, 0.0];
        assert!(s.coords.iter().all(|c| s.distance_between(&o, c) <= 0.8 + 1e-12));
    }

    #[test]
    fn midpoints_have_prescribed_defect() {
        let eps = [1e-2, 1e-3];
        for s in [BaseSample::<f64>::hyperbolic_disc(6, 1.0, 2), BaseSample::euclidean_disc(6, 1.0, 2)] {
            let (s, pairs) = s.with_eps_midpoints(2, &eps).unwrap();
            assert_eq!(s.len(), 10);
            for (k, &(a, b)) in pairs.iter().enumerate() {
                let d = s.distance(a, b);
                for (l, &e) in eps.iter().enumerate() {
                    let m = 6 + k * eps.len() + l;
                    let defect = (s.distance(a, m) - d / 2.0).abs().max((s.distance(m, b) - d / 2.0).abs());
                    assert!((defect - e / 2.0).abs() < 1e-12, "{defect} vs {e}");
                }
            }
        }
    }

    #[test]
    fn tree_is_four_point_hyperbolic() {
        let t = random_tree::<f64>(10, 4).unwrap();
        for (i, j, k, l) in [(0, 1, 2, 3), (2, 5, 7, 9), (1, 4, 6, 8)] {
            let mut s = [t.d(i, j) + t.d(k, l), t.d(i, k) + t.d(j, l), t.d(i, l) + t.d(j, k)];
            s.sort_by(f64::total_cmp);
            assert!((s[2] - s[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn fit_recovers_coefficients() {
        let rows: Vec<_> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|&e| TransferRow { eps: e, defect: 1.5 * e + 4.0 * e * e, predicted: 0.0 })
            .collect();
        let (a, c) = fit_linear_quadratic(&rows);
        assert!((a - 1.5).abs() < 1e-9 && (c - 4.0).abs() < 1e-6);
    }
}
