use uniclass_core::autos::{
    baer_collineation, central_collineation, central_elation_quadric, enumerate_automorphism_group, pgl_order,
    quadric_reflection, quadric_root_elation, random_automorphism, spread_collineation, symplectic_polarity,
    Automorphism, CentralKind,
};
use uniclass_core::coxeter::CoxeterSystem;
use uniclass_core::geometry::Geometry;

fn action_of(g: &Geometry, a: &Automorphism) -> uniclass_core::autos::Action {
    let sys = CoxeterSystem::build(g.coxeter_type()).unwrap();
    a.action(g, &sys).unwrap()
}

#[test]
fn symplectic_polarity_is_an_absolute_involution() {
    for n in [3usize, 5] {
        let g = Geometry::build_projective(n, 2).unwrap();
        let a = symplectic_polarity(&g).unwrap();
        assert!(a.duality);
        let act = action_of(&g, &a);
        for p in g.ids_of_dim(1) {
            let h = act.image(p);
            assert_eq!(g.dim(h), n);
            assert!(g.incident(p, h), "point {p} not absolute");
            assert_eq!(act.image(h), p);
        }
        let square = a.then(g.field(), &a);
        assert!(!square.duality);
        assert!(action_of(&g, &square).is_identity());
    }
}

#[test]
fn spread_collineation_is_fixed_point_free_with_a_fixed_line_spread() {
    for q in [2u32, 4] {
        let g = Geometry::build_projective(3, q).unwrap();
        let act = action_of(&g, &spread_collineation(&g).unwrap());
        assert!(g.ids_of_dim(1).all(|p| !act.fixes(p)));
        let fixed: Vec<u32> = g.ids_of_dim(2).filter(|&l| act.fixes(l)).collect();
        let mut cover = vec![0usize; g.point_count()];
        for &l in &fixed {
            for p in g.points_of(l).iter() {
                cover[p] += 1;
            }
        }
        assert!(cover.iter().all(|&c| c == 1), "PG(3,{q})");
        assert_eq!(fixed.len(), (q * q + 1) as usize);
    }
}

#[test]
fn quadric_maps_preserve_the_form() {
    let cases: Vec<(Geometry, Automorphism)> = {
        let hq3 = Geometry::build_hyperbolic_quadric(4, 3).unwrap();
        let hq2 = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
        let pq3 = Geometry::build_parabolic_quadric(3, 3).unwrap();
        let pq2 = Geometry::build_parabolic_quadric(3, 2).unwrap();
        vec![
            (hq3.clone(), quadric_reflection(&hq3).unwrap()),
            (hq2.clone(), quadric_root_elation(&hq2).unwrap()),
            (hq2.clone(), spread_collineation(&hq2).unwrap()),
            (hq2.clone(), random_automorphism(&hq2, 4).unwrap()),
            (pq3.clone(), quadric_reflection(&pq3).unwrap()),
            (pq2.clone(), central_elation_quadric(&pq2).unwrap()),
        ]
    };
    for (g, a) in cases {
        let f = g.field();
        for p in g.ids_of_dim(1) {
            let v = a.matrix.apply(f, g.point_vector(p));
            assert_eq!(g.quadratic_form(&v), 0, "{}", g.label());
        }
    }
}

#[test]
fn reflections_fix_a_hyperplane_section() {
    let g = Geometry::build_parabolic_quadric(3, 3).unwrap();
    let act = action_of(&g, &quadric_reflection(&g).unwrap());
    let fixed = g.ids_of_dim(1).filter(|&p| act.fixes(p)).count();
    // X_0 = 0 meets Q(6,3) in a hyperbolic Q+(5,3)
    assert_eq!(fixed, (9 + 1) * (27 - 1) / 2);
}

#[test]
fn central_collineations_and_baer_subplanes() {
    let g = Geometry::build_projective(2, 3).unwrap();
    let c = [1u8, 0, 0];
    let (_, kind) = central_collineation(&g, &c, &[0, 1, 0], 1).unwrap();
    assert_eq!(kind, CentralKind::Elation);
    let (h, kind) = central_collineation(&g, &c, &[1, 0, 0], 2).unwrap();
    assert_eq!(kind, CentralKind::Homology);
    let act = action_of(&g, &h);
    // the axis and the centre are fixed pointwise: 4 + 1 points
    assert_eq!(g.ids_of_dim(1).filter(|&p| act.fixes(p)).count(), 5);

    let g = Geometry::build_projective(2, 4).unwrap();
    let act = action_of(&g, &baer_collineation(&g).unwrap());
    assert_eq!(g.ids_of_dim(1).filter(|&p| act.fixes(p)).count(), 7);
    assert_eq!(g.ids_of_dim(2).filter(|&l| act.fixes(l)).count(), 7);
}

#[test]
fn group_enumeration_and_algebra() {
    let g = Geometry::build_projective(2, 2).unwrap();
    let all = enumerate_automorphism_group(&g, 1_000).unwrap();
    assert_eq!(all.len() as u64, 2 * pgl_order(2, 2));
    assert_eq!(all.iter().filter(|a| a.duality).count(), 168);
    assert!(enumerate_automorphism_group(&g, 100).is_err());
    let f = g.field();
    for a in all.iter().step_by(13) {
        let inv = a.inverse(f);
        assert!(action_of(&g, &a.then(f, &inv)).is_identity());
        let order = (1..=8).find(|&k| action_of(&g, &a.power(f, k)).is_identity());
        assert!(order.is_some());
    }
}

#[test]
fn random_maps_are_seeded() {
    let g = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
    assert_eq!(random_automorphism(&g, 77).unwrap(), random_automorphism(&g, 77).unwrap());
    assert_ne!(random_automorphism(&g, 77).unwrap(), random_automorphism(&g, 78).unwrap());
}

#[test]
fn constructors_reject_unsuitable_geometries() {
    let pq = Geometry::build_parabolic_quadric(3, 2).unwrap();
    assert!(symplectic_polarity(&pq).is_err());
    let hq2 = Geometry::build_hyperbolic_quadric(4, 2).unwrap();
    assert!(quadric_reflection(&hq2).is_err());
    let pg = Geometry::build_projective(3, 2).unwrap();
    assert!(baer_collineation(&pg).is_err());
}
