use lorcomp::directions::{
    angle_estimate, angle_estimate_with, chronology_flip, exp_map, log_map, smooth_angle, GridSpec,
};
use lorcomp::hyperbolic::{h2_distance, HPoint};
use lorcomp::{Ambient, Curvature, Direction};
use proptest::prelude::*;

fn ambient() -> impl Strategy<Value = Ambient> {
    prop::sample::select(vec![
        Ambient::minkowski2(),
        Ambient::minkowski3(),
        Ambient::de_sitter(1.0).unwrap(),
        Ambient::anti_de_sitter(1.0).unwrap(),
    ])
}

fn direction(spec: Ambient) -> impl Strategy<Value = Direction> {
    (-1.0f64..1.0, 0.0f64..std::f64::consts::TAU)
        .prop_map(move |(rho, phi)| Direction::from_rapidity(spec, rho, phi).unwrap())
}

fn estimate(d1: &Direction, d2: &Direction) -> f64 {
    angle_estimate(d1, d2, &GridSpec::default()).unwrap().estimate.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn estimate_matches_smooth_angle((d1, d2) in ambient().prop_flat_map(|s| (direction(s), direction(s)))) {
        let smooth = smooth_angle(&d1, &d2).unwrap();
        prop_assume!(smooth > 1e-3);
        let g = angle_estimate(&d1, &d2, &GridSpec::default()).unwrap();
        prop_assert!((g.estimate.unwrap() - smooth).abs() <= 1e-4, "{:?} vs {smooth}", g.estimate);
        prop_assert!((g.extrapolated.unwrap() - smooth).abs() <= 1e-4);
    }

    #[test]
    fn estimate_does_not_depend_on_the_model_curvature(
        (d1, d2) in ambient().prop_flat_map(|s| (direction(s), direction(s))),
    ) {
        prop_assume!(smooth_angle(&d1, &d2).unwrap() > 1e-3);
        let flat = estimate(&d1, &d2);
        for k in [-1.0, 1.0] {
            let g = angle_estimate_with(&d1, &d2, &GridSpec::default(), &Curvature::new(k).unwrap()).unwrap();
            prop_assert!((g.estimate.unwrap() - flat).abs() <= 1e-4);
        }
    }

    #[test]
    fn angles_form_a_metric((a, b, c) in ambient().prop_flat_map(|s| (direction(s), direction(s), direction(s)))) {
        let (ab, ba) = (estimate(&a, &b), estimate(&b, &a));
        prop_assert_eq!(ab, ba);
        let (bc, ac) = (estimate(&b, &c), estimate(&a, &c));
        prop_assert!(ac <= ab + bc + 1e-3);
        prop_assert!(ab <= ac + bc + 1e-3);
        prop_assert!(bc <= ab + ac + 1e-3);
    }

    #[test]
    fn directions_of_flat_space_form_the_hyperbolic_plane(
        (d1, d2) in (direction(Ambient::minkowski3()), direction(Ambient::minkowski3())),
    ) {
        let h = h2_distance(&HPoint::new(d1.u).unwrap(), &HPoint::new(d2.u).unwrap());
        prop_assume!(h > 1e-3);
        prop_assert!((estimate(&d1, &d2) - h).abs() <= 1e-4);
    }

    #[test]
    fn flat_chronology_flips_at_exp_minus_omega(omega in 0.05f64..3.0, t in 0.01f64..10.0) {
        let m2 = Ambient::minkowski2();
        let (a, b) = (Direction::from_rapidity(m2, 0.0, 0.0).unwrap(), Direction::from_rapidity(m2, omega, 0.0).unwrap());
        let flip = chronology_flip(&a, &b, t, 1e-12).unwrap();
        prop_assert!((flip - (-omega).exp()).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_inverts_exp_in_de_sitter(d in direction(Ambient::de_sitter(1.0).unwrap()), r in 0.01f64..2.0) {
        let ds = d.ambient;
        let x = exp_map(&ds, &d.p, r, &d).unwrap();
        let (tau, back) = log_map(&ds, &d.p, &x).unwrap();
        prop_assert!((tau - r).abs() <= 1e-9 * r.max(1.0));
        prop_assert!(smooth_angle(&back, &d).unwrap() <= 1e-7);
    }
}
