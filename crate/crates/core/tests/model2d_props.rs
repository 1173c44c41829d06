use lorcomp::model2d::{
    comparison_angle, initial_tangent, ordered_tau, realize_triangle, reflect_across_geodesic, tau_model, Vertex,
};
use lorcomp::{Curvature, Sides, Vec3};
use proptest::prelude::*;

const VERTICES: [Vertex; 3] = [Vertex::X, Vertex::Y, Vertex::Z];

fn curvature() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![-1.0, -0.25, 0.0, 0.25, 1.0])
}

/// Nondegenerate timelike triangles well inside the AdS diameter at `K = -1`.
fn sides() -> impl Strategy<Value = Sides> {
    (0.05f64..1.0, 0.05f64..1.0, 0.01f64..0.8).prop_map(|(a, b, e)| Sides::new(a, b, a + b + e).unwrap())
}

fn acosh1p(x: f64) -> f64 {
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

fn angle_between(p: &Curvature, u: &Vec3<f64>, v: &Vec3<f64>) -> f64 {
    let w = [u[0] - v[0], u[1] - v[1], u[2] - v[2]];
    acosh1p((-p.inner(&w, &w) / 2.0).max(0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn realization_reproduces_sides(k in curvature(), s in sides()) {
        let p = Curvature::new(k).unwrap();
        let t = realize_triangle(&p, &s).unwrap();
        let got = [
            ordered_tau(&p, &t.px, &t.py).unwrap(),
            ordered_tau(&p, &t.py, &t.pz).unwrap(),
            ordered_tau(&p, &t.px, &t.pz).unwrap(),
        ];
        for (g, w) in got.into_iter().zip([s.a, s.b, s.c]) {
            prop_assert!((g - w).abs() <= 1e-9 * w, "{g} vs {w}");
        }
    }

    #[test]
    fn angles_match_tangent_oracle(k in curvature(), s in sides()) {
        let p = Curvature::new(k).unwrap();
        let t = realize_triangle(&p, &s).unwrap();
        let tan = |a, b| initial_tangent(&p, a, b).unwrap();
        let past_to_future = |u: Vec3<f64>| [-u[0], -u[1], -u[2]];
        let oracle = [
            angle_between(&p, &tan(&t.px, &t.py), &tan(&t.px, &t.pz)),
            angle_between(&p, &past_to_future(tan(&t.py, &t.px)), &tan(&t.py, &t.pz)),
            angle_between(&p, &tan(&t.pz, &t.px), &tan(&t.pz, &t.py)),
        ];
        for (v, o) in VERTICES.into_iter().zip(oracle) {
            let a = comparison_angle(&p, &s, v).unwrap();
            prop_assert!((a - o).abs() <= 1e-9, "{v:?}: {a} vs {o}");
        }
    }

    #[test]
    fn collinear_triples_have_zero_angles(k in curvature(), a in 0.01f64..1.4, b in 0.01f64..1.4) {
        let p = Curvature::new(k).unwrap();
        let s = Sides::new(a, b, a + b).unwrap();
        for v in VERTICES {
            prop_assert!(comparison_angle(&p, &s, v).unwrap().abs() <= 1e-9);
        }
    }

    #[test]
    fn scaling_trades_size_for_curvature(k in curvature(), s in sides(), lambda in 0.1f64..10.0) {
        let p = Curvature::new(k).unwrap();
        let q = p.rescaled(lambda).unwrap();
        for v in VERTICES {
            let a = comparison_angle(&p, &s, v).unwrap();
            let b = comparison_angle(&q, &s.scaled(lambda), v).unwrap();
            prop_assert!((a - b).abs() <= 1e-9, "{v:?}: {a} vs {b}");
        }
    }

    #[test]
    fn angles_are_continuous_in_curvature_at_zero(s in sides()) {
        for v in VERTICES {
            let flat = comparison_angle(&Curvature::flat(), &s, v).unwrap();
            for k in [-1e-6, 1e-6] {
                let a = comparison_angle(&Curvature::new(k).unwrap(), &s, v).unwrap();
                prop_assert!((a - flat).abs() <= 1e-4);
            }
        }
    }

    #[test]
    fn reflection_preserves_time_separation(
        k in curvature(),
        g in (0.2f64..1.0, -0.3f64..0.3),
        pts in prop::collection::vec((-1.0f64..1.0, -0.6f64..0.6), 2),
    ) {
        let p = Curvature::new(k).unwrap();
        let (g1, g2) = (p.origin(), p.point_at(g.0, g.1));
        let (a, b) = (p.point_at(pts[0].0, pts[0].1), p.point_at(pts[1].0, pts[1].1));
        let (ra, rb) = (
            reflect_across_geodesic(&p, &g1, &g2, &a).unwrap(),
            reflect_across_geodesic(&p, &g1, &g2, &b).unwrap(),
        );
        match (tau_model(&p, &a, &b), tau_model(&p, &ra, &rb)) {
            (Ok((t, c)), Ok((rt, rc))) => {
                prop_assert!((t - rt).abs() <= 1e-9, "{t} vs {rt}");
                prop_assert_eq!(c.is_timelike(), rc.is_timelike());
            }
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "{x:?} vs {y:?}"),
        }
    }
}
