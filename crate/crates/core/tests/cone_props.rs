use lorcomp::cone::{
    base_curvature_minus1_check, build_cone_space, circular_map, cone_metric, cone_tau, polar_map, random_tree,
    transfer_quantities, BaseSample, ConePoint,
};
use lorcomp::curvcheck::{scan_four_point, BoundSide};
use lorcomp::lorspace::validate_axioms;
use lorcomp::{Curvature, MetricSpace};
use proptest::prelude::*;

const RADII: [f64; 4] = [1.0, 1.4, 1.96, 2.744];
const EPS: [f64; 3] = [1e-2, 1e-3, 1e-4];

fn flat_tau(a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dt, dx) = (b.0 - a.0, b.1 - a.1);
    if dt > 0.0 && dt * dt > dx * dx {
        (dt * dt - dx * dx).sqrt()
    } else {
        0.0
    }
}

/// A timelike cone pair `(r2, r3, d)`.
fn timelike_pair() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.1f64..2.0, 1.05f64..4.0, 0.01f64..0.99).prop_map(|(r2, ratio, f)| {
        let r3 = r2 * ratio;
        let dmax = 2.0 * ((r3 - r2) / (2.0 * (r2 * r3).sqrt())).asinh();
        (r2, r3, f * dmax)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn polar_map_is_an_isometry(r1 in 0.0f64..3.0, r2 in 0.0f64..3.0, y1 in -1.5f64..1.5, y2 in -1.5f64..1.5) {
        let (a, b) = (ConePoint::new(r1, 0).unwrap(), ConePoint::new(r2, 1).unwrap());
        let dy = (y1 - y2).abs();
        let t = cone_tau(&a, &b, dy).unwrap().tau;
        prop_assert!((t - flat_tau(polar_map(r1, y1), polar_map(r2, y2))).abs() <= 1e-12);
        let (p, q) = (circular_map(r1, y1), circular_map(r2, y2));
        let euclid = ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
        prop_assert!((cone_metric(&a, &b, dy).unwrap() - euclid).abs() <= 1e-12);
    }

    #[test]
    fn transfer_point_is_an_exact_midpoint((r2, r3, d) in timelike_pair()) {
        let q = transfer_quantities(r2, r3, d).unwrap();
        let (x2, x3, xm) = (ConePoint::new(r2, 0).unwrap(), ConePoint::new(r3, 1).unwrap(), ConePoint::new(q.r_m, 2).unwrap());
        let tau = cone_tau(&x2, &x3, d).unwrap().tau;
        prop_assert!((cone_tau(&x2, &xm, d / 2.0).unwrap().tau - q.mu * tau).abs() <= 1e-9);
        prop_assert!((cone_tau(&xm, &x3, d / 2.0).unwrap().tau - (1.0 - q.mu) * tau).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cones_satisfy_the_axioms(seed in any::<u64>(), n in 1usize..16) {
        for base in [
            BaseSample::hyperbolic_disc(n, 1.0, seed).metric().unwrap(),
            BaseSample::euclidean_disc(n, 1.0, seed).metric().unwrap(),
            random_tree(n, seed).unwrap(),
        ] {
            let cone = build_cone_space(&base, &RADII, true).unwrap();
            let report = validate_axioms(&cone, 1e-9);
            prop_assert!(report.pass, "{:?}", report.violations);
        }
    }

    #[test]
    fn first_order_law_holds_on_hyperbolic_pairs(seed in any::<u64>()) {
        let base = BaseSample::hyperbolic_disc(12, 1.0, seed);
        for j in (1..base.len()).filter(|&j| (0.2..0.9).contains(&base.distance(0, j))) {
            let fit = base.transfer_fit(0, j, 1.0, 3.0, &EPS).unwrap();
            prop_assert!(fit.relative_error <= 0.05, "{fit:?}");
            for row in &fit.rows {
                prop_assert!(row.defect <= row.predicted + fit.quadratic.abs() * row.eps * row.eps + 1e-12);
            }
        }
    }
}

/// The cone condition in the crate's lower direction and the base check.
fn cone_and_base(base: &MetricSpace) -> (bool, bool) {
    let cone = build_cone_space(base, &RADII, false).unwrap();
    let cone_pass = scan_four_point(&cone, &Curvature::flat(), BoundSide::Lower, 1e-7).pass;
    let base_pass = base_curvature_minus1_check(base, &EPS, 1e-6).unwrap().pass;
    (cone_pass, base_pass)
}

#[test]
fn cone_condition_transfers_to_the_base() {
    let mut corpus: Vec<(String, MetricSpace)> = vec![("single point".into(), MetricSpace::single_point())];
    for seed in 0..3 {
        let (h2, _) = BaseSample::hyperbolic_disc(24, 0.8, seed).with_eps_midpoints(6, &EPS).unwrap();
        corpus.push((format!("H² {seed}"), h2.metric().unwrap()));
        let (h1, _) = BaseSample::line_grid(10 + 2 * seed as usize, -0.8, 0.8).with_eps_midpoints(4, &EPS).unwrap();
        corpus.push((format!("H¹ {seed}"), h1.metric().unwrap()));
        corpus.push((format!("tree {seed}"), random_tree(14, seed).unwrap()));
    }
    for (name, base) in &corpus {
        let (cone_pass, base_pass) = cone_and_base(base);
        assert!(cone_pass, "{name}: cone fails");
        assert!(base_pass, "{name}: base fails although its cone passes");
    }
    let (e2, _) = BaseSample::euclidean_disc(24, 1.0, 5).with_eps_midpoints(6, &EPS).unwrap();
    let (cone_pass, base_pass) = cone_and_base(&e2.metric().unwrap());
    assert!(!cone_pass && !base_pass);
}

#[test]
fn hyperbolic_cone_passes_both_sides() {
    let base = BaseSample::hyperbolic_disc(30, 0.8, 2).metric().unwrap();
    let cone = build_cone_space(&base, &RADII, true).unwrap();
    for side in [BoundSide::Upper, BoundSide::Lower] {
        let r = scan_four_point(&cone, &Curvature::flat(), side, 1e-7);
        assert!(r.pass && r.tested > 0, "{side}: {:?}", r.worst_margin);
    }
}
