use lorcomp::lorspace::{ambient_tau, parse_space, space_to_json, sprinkle, validate_axioms, AmbientKind, Region};
use lorcomp::model2d::CausalClass;
use lorcomp::{Ambient, Space};
use proptest::prelude::*;

fn ambient() -> impl Strategy<Value = (Ambient, Region<f64>)> {
    prop::sample::select(vec![
        (Ambient::minkowski2(), Region::new((0.0, 2.0), (-1.0, 1.0))),
        (Ambient::minkowski3(), Region::new((0.0, 2.0), (-1.0, 1.0)).with_y((-1.0, 1.0))),
        (Ambient::de_sitter(1.0).unwrap(), Region::new((0.0, 2.0), (-1.0, 1.0))),
        (Ambient::de_sitter(2.0).unwrap(), Region::new((-1.0, 1.0), (-1.0, 1.0))),
        (Ambient::anti_de_sitter(1.0).unwrap(), Region::new((0.0, 2.0), (-0.5, 0.5))),
    ])
}

fn generated() -> impl Strategy<Value = Space> {
    (ambient(), 0usize..25, any::<u64>())
        .prop_map(|((spec, region), n, seed)| sprinkle(&spec, &region, n, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sprinkles_satisfy_the_axioms(space in generated()) {
        let report = validate_axioms(&space, 1e-9);
        prop_assert!(report.pass, "{:?}", report.violations);
    }

    #[test]
    fn causal_matrix_is_the_exact_relation(space in generated()) {
        let prov = space.provenance().unwrap();
        for i in 0..space.len() {
            for j in 0..space.len() {
                let (tau, class) = ambient_tau(&prov.ambient, &prov.coords[i], &prov.coords[j]).unwrap();
                let future = class == CausalClass::TimelikeFuture;
                prop_assert_eq!(space.causal(i, j), i == j || future);
                prop_assert_eq!(space.tau(i, j), if future { tau } else { 0.0 });
            }
        }
    }

    #[test]
    fn serialization_is_lossless(space in generated()) {
        let back: Space = parse_space(&space_to_json(&space)).unwrap();
        prop_assert_eq!(back, space);
    }
}

#[test]
fn generation_is_deterministic_in_the_seed() {
    let spec = Ambient::anti_de_sitter(1.0).unwrap();
    assert_eq!(spec.kind, AmbientKind::AntiDeSitter2);
    let r = Region::new((0.0, 2.0), (-0.5, 0.5));
    assert_eq!(sprinkle(&spec, &r, 20, 9).unwrap(), sprinkle(&spec, &r, 20, 9).unwrap());
    assert_ne!(sprinkle(&spec, &r, 20, 9).unwrap(), sprinkle(&spec, &r, 20, 10).unwrap());
}
