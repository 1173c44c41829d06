//! Seeded instance generators over analytic ambients.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ambient::{ambient_geodesic, ambient_tau, AmbientKind, AmbientSpec};
use super::{FiniteLorentzSpace, Provenance};
use crate::error::{Error, Result};
use crate::model2d::CausalClass;
use crate::scalar::{euclid_dist3, Scalar, Vec3};

/// Coordinate box in intrinsic coordinates `(t, x[, y])`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub t: (T, T),
    pub x: (T, T),
    pub y: Option<(T, T)>,
}

impl<T: Scalar> Region<T> {
    pub fn new(t: (T, T), x: (T, T)) -> Self {
        Self { t, x, y: None }
    }

    pub fn with_y(mut self, y: (T, T)) -> Self {
        self.y = Some(y);
        self
    }

    fn validate(&self, spec: &AmbientSpec<T>) -> Result<()> {
        let ok = |(lo, hi): (T, T)| lo.is_finite() && hi.is_finite() && lo < hi;
        if !ok(self.t) || !ok(self.x) {
            return Err(Error::Generation("empty coordinate box".into()));
        }
        if spec.kind == AmbientKind::Minkowski3 {
            match self.y {
                Some(y) if ok(y) => {}
                _ => return Err(Error::Generation("minkowski-3 needs a nonempty y range".into())),
            }
        }
        if spec.kind == AmbientKind::AntiDeSitter2 && self.t.1 - self.t.0 >= spec.injectivity_bound() {
            return Err(Error::Generation(format!(
                "time extent {} leaves the simply connected patch (bound {})",
                self.t.1 - self.t.0,
                spec.injectivity_bound()
            )));
        }
        Ok(())
    }

    fn sample(&self, spec: &AmbientSpec<T>, rng: &mut ChaCha8Rng) -> Vec3<T> {
        let mut draw = |(lo, hi): (T, T)| lo + (hi - lo) * T::lit(rng.gen::<f64>());
        let t = draw(self.t);
        let x = draw(self.x);
        let y = self.y.map(&mut draw).unwrap_or_else(T::zero);
        spec.point_at(t, x, y)
    }
}

/// Builds the finite space induced on `points` by the ambient: exact `τ`,
/// the causal relation `p ≪ q` (plus reflexivity), and a background metric
/// that is Euclidean in coordinates for flat kinds and chordal otherwise.
pub fn space_from_points<T: Scalar>(spec: &AmbientSpec<T>, points: Vec<Vec3<T>>) -> Result<FiniteLorentzSpace<T>> {
    let n = points.len();
    let mut d = vec![T::zero(); n * n];
    let mut tau = vec![T::zero(); n * n];
    let mut causal = vec![false; n * n];
    for i in 0..n {
        causal[i * n + i] = true;
        for j in 0..n {
            if i == j {
                continue;
            }
            let (t, class) = ambient_tau(spec, &points[i], &points[j])?;
            d[i * n + j] = euclid_dist3(&points[i], &points[j]);
            if class == CausalClass::TimelikeFuture {
                tau[i * n + j] = t;
                causal[i * n + j] = true;
            }
        }
    }
    FiniteLorentzSpace::from_flat(n, d, tau, causal)?.with_provenance(Provenance { ambient: *spec, coords: points })
}

/// `n` points drawn uniformly from `region`, deterministic in `seed`.
pub fn sprinkle<T: Scalar>(
    spec: &AmbientSpec<T>,
    region: &Region<T>,
    n: usize,
    seed: u64,
) -> Result<FiniteLorentzSpace<T>> {
    region.validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| region.sample(spec, &mut rng)).collect();
    space_from_points(spec, points)
}

/// Points `t = 1, …, n` on the time axis of two-dimensional Minkowski space.
pub fn chain<T: Scalar>(n: usize) -> FiniteLorentzSpace<T> {
    let spec = AmbientSpec::minkowski2();
    let points = (1..=n).map(|i| [T::from_index(i), T::zero(), T::zero()]).collect();
    space_from_points(&spec, points).expect("chain points are valid")
}

/// How many approximate midpoints a sprinkle is seeded with.
///
/// Each chosen base pair receives one point per level `ε` in `eps_levels`,
/// placed on the geodesic at the `μ`-split (cycling through `mus`) and moved
/// along it by `offset_fraction · ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MidpointPlan<T> {
    pub pairs: usize,
    pub mus: Vec<T>,
    pub eps_levels: Vec<T>,
    pub offset_fraction: T,
}

impl<T: Scalar> MidpointPlan<T> {
    pub fn point_count(&self) -> usize {
        self.pairs * self.eps_levels.len()
    }
}

/// A sprinkle of `n_base` points followed by approximate `μ`-points of
/// randomly chosen long timelike pairs of the base.
pub fn sprinkle_with_midpoints<T: Scalar>(
    spec: &AmbientSpec<T>,
    region: &Region<T>,
    n_base: usize,
    plan: &MidpointPlan<T>,
    seed: u64,
) -> Result<FiniteLorentzSpace<T>> {
    region.validate(spec)?;
    if plan.pairs > 0 && plan.mus.is_empty() {
        return Err(Error::Generation("midpoint plan without μ values".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vec3<T>> = (0..n_base).map(|_| region.sample(spec, &mut rng)).collect();

    let mut timelike = Vec::new();
    for i in 0..n_base {
        for j in 0..n_base {
            let (t, class) = ambient_tau(spec, &points[i], &points[j])?;
            if class == CausalClass::TimelikeFuture {
                timelike.push((t, i, j));
            }
        }
    }
    if plan.pairs > 0 && timelike.is_empty() {
        return Err(Error::Generation("no timelike pairs to seed midpoints on".into()));
    }
    let longest = timelike.iter().fold(T::zero(), |m, p| m.max(p.0));
    let mut long: Vec<_> = timelike.into_iter().filter(|p| p.0 >= T::lit(0.25) * longest).collect();
    long.shuffle(&mut rng);
    if long.len() < plan.pairs {
        return Err(Error::Generation(format!("only {} long timelike pairs for {} requested", long.len(), plan.pairs)));
    }
    for (k, &(tau, i, j)) in long.iter().take(plan.pairs).enumerate() {
        let mu = plan.mus[k % plan.mus.len()];
        for &eps in &plan.eps_levels {
            let sign = if rng.gen::<bool>() { T::one() } else { -T::one() };
            let u = (mu * tau + sign * plan.offset_fraction * eps).max(T::zero()).min(tau);
            points.push(ambient_geodesic(spec, &points[i], &points[j], u)?);
        }
    }
    space_from_points(spec, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorspace::validate_axioms;

    #[test]
    fn chain_has_integer_taus() {
        let c = chain::<f64>(5);
        for i in 0..5 {
            for j in i + 1..5 {
                assert_eq!(c.tau(i, j), (j - i) as f64);
                assert_eq!(c.tau(j, i), 0.0);
            }
        }
    }

    #[test]
    fn sprinkles_are_deterministic_and_valid() {
        let ds = AmbientSpec::de_sitter(1.0).unwrap();
        let r = Region::new((0.0, 2.0), (-1.0, 1.0));
        let a = sprinkle(&ds, &r, 25, 3).unwrap();
        let b = sprinkle(&ds, &r, 25, 3).unwrap();
        assert_eq!(a, b);
        assert!(validate_axioms(&a, 1e-9).pass);
        assert_eq!(sprinkle(&ds, &r, 0, 3).unwrap().len(), 0);
    }

    #[test]
    fn empty_region_is_rejected() {
        let m = AmbientSpec::<f64>::minkowski2();
        let r = Region::new((1.0, 1.0), (0.0, 1.0));
        assert!(matches!(sprinkle(&m, &r, 3, 0), Err(Error::Generation(_))));
        let m3 = AmbientSpec::<f64>::minkowski3();
        assert!(sprinkle(&m3, &Region::new((0.0, 1.0), (0.0, 1.0)), 3, 0).is_err());
    }

    #[test]
    fn inserted_midpoints_hit_their_split() {
        let m = AmbientSpec::<f64>::minkowski2();
        let r = Region::new((0.0, 1.0), (-0.5, 0.5));
        let plan = MidpointPlan { pairs: 3, mus: vec![0.5], eps_levels: vec![0.1, 0.01], offset_fraction: 0.0 };
        let s = sprinkle_with_midpoints(&m, &r, 10, &plan, 11).unwrap();
        assert_eq!(s.len(), 16);
        assert!(validate_axioms(&s, 1e-9).pass);
    }
}
